"""
Explicit-state exploration and Aldebaran export.
"""

from .aut import export_aut, import_aut, parse_label
from .lts import CanonicalState, Lts, Truncation
from .search import explore

__all__ = [
    "CanonicalState",
    "Lts",
    "Truncation",
    "explore",
    "export_aut",
    "import_aut",
    "parse_label",
]
