"""Utility modules for picardcusps."""

from .config import Config, load_config
from .validators import PicardError, ValidationError, InvariantViolation
from .formatters import format_structure, json_line

__all__ = [
    'Config', 'load_config',
    'PicardError', 'ValidationError', 'InvariantViolation',
    'format_structure', 'json_line',
]
