"""
Command-line interface.
"""

from .app import app, main
from .report import RunReport

__all__ = ["RunReport", "app", "main"]
