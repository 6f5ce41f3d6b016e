"""Command parsing and handling for the command line surface."""

from app.commands.handlers import CommandHandler
from app.commands.parser import CommandParser, Grid

__all__ = ['CommandHandler', 'CommandParser', 'Grid']
