"""Utility modules"""
from app.utils.decorators import handle_errors, timed, validate_input
from app.utils.validators import FieldValidators

__all__ = ['handle_errors', 'timed', 'validate_input', 'FieldValidators']
