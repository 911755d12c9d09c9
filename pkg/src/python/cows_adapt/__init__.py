"""
cows-adapt - modelling and verification of dynamic service adaptation
"""

from .config import CowsConfig
from .errors import CowsError
from .explorer import explore, export_aut, import_aut
from .logic import check, check_from_aut, parse_formula, parse_properties
from .scenario import build_tollbooth
from .syntax import parse_model, pretty_print

__version__ = "1.0.0"
__all__ = [
    "CowsConfig",
    "CowsError",
    "build_tollbooth",
    "check",
    "check_from_aut",
    "explore",
    "export_aut",
    "import_aut",
    "parse_formula",
    "parse_model",
    "parse_properties",
    "pretty_print",
]
