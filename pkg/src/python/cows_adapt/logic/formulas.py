"""
Action-based branching-time formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

from ..semantics.transitions import Comm, Label
from ..syntax.printer import format_value
from ..syntax.terms import Value

WILDCARD = "*"


@dataclass(frozen=True)
class ActionPattern:
    """
    Pattern over communication labels.

    ``None`` is a wildcard: for ``partner`` and ``operation`` any name, for
    ``values`` any tuple, and for a single element of ``values`` any value.
    Kill and tau labels never match.
    """

    partner: Optional[str] = None
    operation: Optional[str] = None
    values: Optional[Tuple[Optional[Value], ...]] = None

    def matches(self, label: Label) -> bool:
        if not isinstance(label, Comm):
            return False
        if self.partner is not None and self.partner != label.partner:
            return False
        if self.operation is not None and self.operation != label.operation:
            return False
        if self.values is None:
            return True
        if len(self.values) != len(label.values):
            return False
        return all(p is None or p == v for p, v in zip(self.values, label.values))

    def __str__(self) -> str:
        partner = self.partner if self.partner is not None else WILDCARD
        operation = self.operation if self.operation is not None else WILDCARD
        if self.values is None:
            values = WILDCARD
        else:
            values = ",".join(WILDCARD if v is None else format_value(v) for v in self.values)
        return f"{partner}.{operation}<{values}>"


@dataclass(frozen=True)
class Top:
    """The formula ``true``."""


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    """Some matching step leads to a state satisfying ``sub``."""

    pattern: ActionPattern
    sub: "Formula"


@dataclass(frozen=True)
class Box:
    """Every matching step leads to a state satisfying ``sub``."""

    pattern: ActionPattern
    sub: "Formula"


@dataclass(frozen=True)
class EF:
    sub: "Formula"


@dataclass(frozen=True)
class AF:
    sub: "Formula"


@dataclass(frozen=True)
class EG:
    sub: "Formula"


@dataclass(frozen=True)
class AG:
    sub: "Formula"


@dataclass(frozen=True)
class EU:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class AU:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Enabled:
    """A receive on ``partner.operation`` is exposed in the state."""

    partner: str
    operation: str


Formula = Union[Top, Not, And, Or, Implies, Diamond, Box, EF, AF, EG, AG, EU, AU, Enabled]

TRUE = Top()

_UNARY_TEMPORAL = (EF, AF, EG, AG)

# precedence: -> < | < & < prefix operators
_IMPLIES, _OR, _AND, _UNARY = range(4)


def format_formula(formula: Formula, level: int = _IMPLIES) -> str:
    """Render a formula in the property-file syntax."""
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Enabled):
        return f"enabled({formula.partner}.{formula.operation})"
    if isinstance(formula, _UNARY_TEMPORAL):
        return f"{type(formula).__name__}({format_formula(formula.sub)})"
    if isinstance(formula, EU):
        return f"E[{format_formula(formula.left)} U {format_formula(formula.right)}]"
    if isinstance(formula, AU):
        return f"A[{format_formula(formula.left)} U {format_formula(formula.right)}]"
    if isinstance(formula, Not):
        return "!" + format_formula(formula.sub, _UNARY)
    if isinstance(formula, Diamond):
        return f"<{formula.pattern}>{format_formula(formula.sub, _UNARY)}"
    if isinstance(formula, Box):
        return f"[{formula.pattern}] {format_formula(formula.sub, _UNARY)}"

    if isinstance(formula, And):
        own = _AND
        text = f"{format_formula(formula.left, _AND)} & {format_formula(formula.right, _UNARY)}"
    elif isinstance(formula, Or):
        own = _OR
        text = f"{format_formula(formula.left, _OR)} | {format_formula(formula.right, _AND)}"
    elif isinstance(formula, Implies):
        own = _IMPLIES
        text = f"{format_formula(formula.left, _OR)} -> {format_formula(formula.right, _IMPLIES)}"
    else:
        raise TypeError(f"not a formula: {formula!r}")
    return f"({text})" if level > own else text


def subformulas(formula: Formula) -> Iterator[Formula]:
    """The formula and all of its subformulas, children first."""
    if isinstance(formula, (Not, Diamond, Box) + _UNARY_TEMPORAL):
        yield from subformulas(formula.sub)
    elif isinstance(formula, (And, Or, Implies, EU, AU)):
        yield from subformulas(formula.left)
        yield from subformulas(formula.right)
    yield formula


def patterns(formula: Formula) -> Iterator[ActionPattern]:
    for sub in subformulas(formula):
        if isinstance(sub, (Diamond, Box)):
            yield sub.pattern
