"""
Small-step operational semantics of the calculus subset.
"""

from .evaluation import MatchResult, apply_substitution, eval_expr, match_patterns, substitute
from .structure import canonicalize, halt, instantiate, normalize
from .transitions import (
    TAU,
    Comm,
    Config,
    KillEvt,
    Label,
    StepResult,
    StuckExpr,
    Tau,
    enabled_transitions,
    exposed_receives,
    is_enabled,
    tau_closure,
)

__all__ = [
    "TAU",
    "Comm",
    "Config",
    "KillEvt",
    "Label",
    "MatchResult",
    "StepResult",
    "StuckExpr",
    "Tau",
    "apply_substitution",
    "canonicalize",
    "enabled_transitions",
    "eval_expr",
    "exposed_receives",
    "halt",
    "instantiate",
    "is_enabled",
    "match_patterns",
    "normalize",
    "substitute",
    "tau_closure",
]
