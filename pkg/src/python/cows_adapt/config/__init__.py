"""
Configuration package for cows-adapt.

Exploration bounds, logging and report settings, all overridable through
environment variables (optionally loaded from a .env file).
"""

from .settings import CowsConfig

__all__ = ['CowsConfig']
