"""
Abstract syntax, parser and printer for the model dialect.
"""

from .parser import parse_model, validate_model
from .printer import alpha_equivalent, dump_ast, format_term, pretty_print, term_shape
from .scope import resolve_term
from .terms import (
    NIL,
    BindVar,
    BoolVal,
    Call,
    Choice,
    Definition,
    Delim,
    DelimKind,
    Gt,
    IntVal,
    Invoke,
    Kill,
    Lit,
    MatchVal,
    Model,
    NameVal,
    Nil,
    Parallel,
    Protect,
    Receive,
    Replicate,
    Var,
)

__all__ = [
    "NIL",
    "BindVar",
    "BoolVal",
    "Call",
    "Choice",
    "Definition",
    "Delim",
    "DelimKind",
    "Gt",
    "IntVal",
    "Invoke",
    "Kill",
    "Lit",
    "MatchVal",
    "Model",
    "NameVal",
    "Nil",
    "Parallel",
    "Protect",
    "Receive",
    "Replicate",
    "Var",
    "alpha_equivalent",
    "dump_ast",
    "format_term",
    "parse_model",
    "pretty_print",
    "resolve_term",
    "term_shape",
    "validate_model",
]
