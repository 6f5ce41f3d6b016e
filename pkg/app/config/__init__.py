"""Configuration module"""
from app.config.settings import BUNDLED_CORPUS, Settings, get_settings

__all__ = ['BUNDLED_CORPUS', 'Settings', 'get_settings']
