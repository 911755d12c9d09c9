"""
cows-adapt - Python components
"""

__version__ = "1.0.0"
