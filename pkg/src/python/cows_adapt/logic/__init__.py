"""
Action-based branching-time logic: formulas, parser and checker.
"""

from .checker import CheckResult, Verdict, check, check_from_aut
from .formulas import (
    AF,
    AG,
    AU,
    EF,
    EG,
    EU,
    TRUE,
    ActionPattern,
    And,
    Box,
    Diamond,
    Enabled,
    Formula,
    Implies,
    Not,
    Or,
    Top,
    format_formula,
)
from .parser import Property, parse_formula, parse_properties

__all__ = [
    "AF",
    "AG",
    "AU",
    "EF",
    "EG",
    "EU",
    "TRUE",
    "ActionPattern",
    "And",
    "Box",
    "CheckResult",
    "Diamond",
    "Enabled",
    "Formula",
    "Implies",
    "Not",
    "Or",
    "Property",
    "Top",
    "Verdict",
    "check",
    "check_from_aut",
    "format_formula",
    "parse_formula",
    "parse_properties",
]
