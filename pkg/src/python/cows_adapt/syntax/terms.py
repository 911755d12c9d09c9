"""
Abstract syntax of the calculus subset.

All nodes are frozen dataclasses: hashable, comparable by structure and safe
to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Tuple, Union

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

RESERVED = frozenset({"nil", "gt", "true", "false", "let", "in", "end", "kill"})

# Separator between a binder's base name and its canonical index (i -> i$3)
FRESH_SEP = "$"


def base_name(name: str) -> str:
    """Strip the canonical index from a renamed binder."""
    return name.split(FRESH_SEP, 1)[0]


def is_valid_name(text: str) -> bool:
    return bool(NAME_RE.match(text)) and text not in RESERVED


# --- values -----------------------------------------------------------------


@dataclass(frozen=True)
class IntVal:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class NameVal:
    name: str

    def __str__(self) -> str:
        return base_name(self.name)


@dataclass(frozen=True)
class BoolVal:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


Value = Union[IntVal, NameVal, BoolVal]


# --- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Gt:
    left: "Expr"
    right: "Expr"


Expr = Union[Lit, Var, Gt]


# --- patterns -----------------------------------------------------------------


@dataclass(frozen=True)
class BindVar:
    name: str


@dataclass(frozen=True)
class MatchVal:
    value: Value


Pattern = Union[BindVar, MatchVal]


# --- processes ----------------------------------------------------------------


class DelimKind(str, Enum):
    VAR = "var"
    NAME = "name"
    KILL = "kill"


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Invoke:
    partner: str
    operation: str
    args: Tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Receive:
    partner: str
    operation: str
    params: Tuple[Pattern, ...]
    continuation: "Term"


@dataclass(frozen=True)
class Parallel:
    branches: Tuple["Term", ...]


@dataclass(frozen=True)
class Choice:
    """Guarded choice; every branch is a receive."""

    branches: Tuple[Receive, ...]


@dataclass(frozen=True)
class Delim:
    bound: str
    kind: DelimKind
    body: "Term"
    # written [n#] in the dialect
    fresh: bool = False


@dataclass(frozen=True)
class Kill:
    label: str


@dataclass(frozen=True)
class Protect:
    body: "Term"


@dataclass(frozen=True)
class Replicate:
    body: "Term"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Expr, ...] = ()


Term = Union[Nil, Invoke, Receive, Parallel, Choice, Delim, Kill, Protect, Replicate, Call]

NIL = Nil()


@dataclass(frozen=True)
class Definition:
    name: str
    params: Tuple[str, ...]
    body: Term


@dataclass(frozen=True)
class Model:
    """
    A set of process definitions plus the main term.

    ``definitions`` keeps source order; equality ignores it.
    """

    definitions: Dict[str, Definition] = field(default_factory=dict, hash=False)
    main: Term = NIL

    def __hash__(self) -> int:
        return hash((frozenset(self.definitions.items()), self.main))

    def definition(self, name: str) -> Definition:
        return self.definitions[name]


# --- helpers ------------------------------------------------------------------


def children(term: Term) -> Tuple[Term, ...]:
    """Direct subterms of a process, in a fixed order."""
    if isinstance(term, Receive):
        return (term.continuation,)
    if isinstance(term, Parallel):
        return term.branches
    if isinstance(term, Choice):
        return term.branches
    if isinstance(term, (Delim, Protect, Replicate)):
        return (term.body,)
    return ()


def walk(term: Term) -> Iterator[Term]:
    """Pre-order traversal of a process and all of its subprocesses."""
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def expr_names(expr: Expr) -> Iterator[str]:
    """Every identifier mentioned by an expression, variables and names alike."""
    if isinstance(expr, Var):
        yield expr.name
    elif isinstance(expr, Lit):
        if isinstance(expr.value, NameVal):
            yield expr.value.name
    else:
        yield from expr_names(expr.left)
        yield from expr_names(expr.right)


def model_names(model: Model) -> frozenset:
    """Endpoint and name-value identifiers mentioned anywhere in a model."""
    names = set()
    bodies = [d.body for d in model.definitions.values()] + [model.main]
    for body in bodies:
        for node in walk(body):
            if isinstance(node, (Invoke, Receive)):
                names.add(node.partner)
                names.add(node.operation)
            if isinstance(node, (Invoke, Call)):
                for arg in node.args:
                    names.update(expr_names(arg))
            if isinstance(node, Receive):
                for pattern in node.params:
                    if isinstance(pattern, MatchVal) and isinstance(pattern.value, NameVal):
                        names.add(pattern.value.name)
    return frozenset(names)
