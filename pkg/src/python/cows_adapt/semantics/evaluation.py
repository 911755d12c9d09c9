"""
Expression evaluation, pattern matching and substitution.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Sequence, cast

from ..errors import ExprTypeError, UnboundVariableError
from ..syntax.terms import (
    BindVar,
    BoolVal,
    Call,
    Choice,
    Delim,
    Expr,
    Gt,
    IntVal,
    Invoke,
    Kill,
    Lit,
    MatchVal,
    NameVal,
    Parallel,
    Pattern,
    Protect,
    Receive,
    Replicate,
    Term,
    Value,
    Var,
)


def eval_expr(expr: Expr, env: Mapping[str, Value]) -> Value:
    """
    Evaluate an expression.

    Args:
        expr: Expression to evaluate
        env: Values of the free variables of ``expr``

    Returns:
        The value of the expression

    Raises:
        UnboundVariableError: a variable is not in ``env``
        ExprTypeError: ``gt`` applied to a non-integer
    """
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise UnboundVariableError(expr.name) from None
    left = eval_expr(expr.left, env)
    right = eval_expr(expr.right, env)
    if not isinstance(left, IntVal) or not isinstance(right, IntVal):
        raise ExprTypeError(f"gt expects integers, got {left} and {right}")
    return BoolVal(left.value > right.value)


@dataclass(frozen=True)
class MatchResult:
    bindings: Dict[str, Value] = field(default_factory=dict, hash=False)
    literal_matches: int = 0


def match_patterns(patterns: Sequence[Pattern], values: Sequence[Value]) -> Optional[MatchResult]:
    """
    Match receive patterns against the values of an invoke.

    Returns None (no match) when the arities differ, a literal differs, or a
    variable repeated in the patterns would be bound to two different values.
    """
    if len(patterns) != len(values):
        return None
    bindings: Dict[str, Value] = {}
    literal_matches = 0
    for pattern, value in zip(patterns, values):
        if isinstance(pattern, MatchVal):
            if pattern.value != value:
                return None
            literal_matches += 1
        elif pattern.name in bindings and bindings[pattern.name] != value:
            return None
        else:
            bindings[pattern.name] = value
    return MatchResult(bindings, literal_matches)


# --- substitution -------------------------------------------------------------


def _subst_expr(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, Gt):
        return Gt(_subst_expr(expr.left, mapping), _subst_expr(expr.right, mapping))
    return expr


def _subst_pattern(pattern: Pattern, mapping: Mapping[str, Expr]) -> Pattern:
    if isinstance(pattern, MatchVal) or pattern.name not in mapping:
        return pattern
    replacement = mapping[pattern.name]
    if isinstance(replacement, Var):
        return BindVar(replacement.name)
    return MatchVal(eval_expr(replacement, {}))


def _subst_name(name: str, mapping: Mapping[str, Expr]) -> str:
    replacement = mapping.get(name)
    if isinstance(replacement, Var):
        return replacement.name
    if isinstance(replacement, Lit) and isinstance(replacement.value, NameVal):
        return replacement.value.name
    return name


def substitute(term: Term, mapping: Mapping[str, Expr]) -> Term:
    """
    Replace free variables of ``term`` by expressions.

    Variables in expressions are replaced as they are; a binding position in a
    pattern becomes a literal (or is renamed when the replacement is itself a
    variable). Endpoint names and kill labels are replaced when the replacement
    is a name. Delimitations shadow.
    """
    if not mapping:
        return term
    if isinstance(term, Invoke):
        return Invoke(
            _subst_name(term.partner, mapping),
            _subst_name(term.operation, mapping),
            tuple(_subst_expr(a, mapping) for a in term.args),
        )
    if isinstance(term, Receive):
        return Receive(
            _subst_name(term.partner, mapping),
            _subst_name(term.operation, mapping),
            tuple(_subst_pattern(p, mapping) for p in term.params),
            substitute(term.continuation, mapping),
        )
    if isinstance(term, Parallel):
        return Parallel(tuple(substitute(b, mapping) for b in term.branches))
    if isinstance(term, Choice):
        return Choice(tuple(cast(Receive, substitute(b, mapping)) for b in term.branches))
    if isinstance(term, Delim):
        if term.bound in mapping:
            inner = {k: v for k, v in mapping.items() if k != term.bound}
            return Delim(term.bound, term.kind, substitute(term.body, inner), term.fresh)
        return Delim(term.bound, term.kind, substitute(term.body, mapping), term.fresh)
    if isinstance(term, Kill):
        return Kill(_subst_name(term.label, mapping))
    if isinstance(term, Protect):
        return Protect(substitute(term.body, mapping))
    if isinstance(term, Replicate):
        return Replicate(substitute(term.body, mapping))
    if isinstance(term, Call):
        return Call(term.name, tuple(_subst_expr(a, mapping) for a in term.args))
    return term


def apply_substitution(term: Term, bindings: Mapping[str, Value]) -> Term:
    """
    Substitute values for free variables.

    Args:
        term: Term to rewrite
        bindings: Variable name to value

    Returns:
        The rewritten term; binders inside ``term`` shadow ``bindings``
    """
    return substitute(term, {name: Lit(value) for name, value in bindings.items()})


# --- renaming -----------------------------------------------------------------


def _rename_value(value: Value, mapping: Mapping[str, str]) -> Value:
    if isinstance(value, NameVal) and value.name in mapping:
        return NameVal(mapping[value.name])
    return value


def _rename_expr(expr: Expr, mapping: Mapping[str, str]) -> Expr:
    if isinstance(expr, Var):
        return Var(mapping.get(expr.name, expr.name))
    if isinstance(expr, Lit):
        return Lit(_rename_value(expr.value, mapping))
    return Gt(_rename_expr(expr.left, mapping), _rename_expr(expr.right, mapping))


def _rename_pattern(pattern: Pattern, mapping: Mapping[str, str]) -> Pattern:
    if isinstance(pattern, BindVar):
        return BindVar(mapping.get(pattern.name, pattern.name))
    return MatchVal(_rename_value(pattern.value, mapping))


def rename_free(term: Term, mapping: Mapping[str, str]) -> Term:
    """Rename free identifiers in every position they can occur in."""
    if not mapping:
        return term
    if isinstance(term, Invoke):
        return Invoke(
            mapping.get(term.partner, term.partner),
            mapping.get(term.operation, term.operation),
            tuple(_rename_expr(a, mapping) for a in term.args),
        )
    if isinstance(term, Receive):
        return Receive(
            mapping.get(term.partner, term.partner),
            mapping.get(term.operation, term.operation),
            tuple(_rename_pattern(p, mapping) for p in term.params),
            rename_free(term.continuation, mapping),
        )
    if isinstance(term, Parallel):
        return Parallel(tuple(rename_free(b, mapping) for b in term.branches))
    if isinstance(term, Choice):
        return Choice(tuple(cast(Receive, rename_free(b, mapping)) for b in term.branches))
    if isinstance(term, Delim):
        inner = {k: v for k, v in mapping.items() if k != term.bound}
        return Delim(term.bound, term.kind, rename_free(term.body, inner), term.fresh)
    if isinstance(term, Kill):
        return Kill(mapping.get(term.label, term.label))
    if isinstance(term, Protect):
        return Protect(rename_free(term.body, mapping))
    if isinstance(term, Replicate):
        return Replicate(rename_free(term.body, mapping))
    if isinstance(term, Call):
        return Call(term.name, tuple(_rename_expr(a, mapping) for a in term.args))
    return term


def _value_names(value: Value) -> Iterator[str]:
    if isinstance(value, NameVal):
        yield value.name


def free_names(term: Term) -> frozenset:
    """Identifiers occurring free in ``term``, in any position."""
    names = set()
    _collect_free(term, frozenset(), names)
    return frozenset(names)


def _expr_idents(expr: Expr) -> Iterator[str]:
    if isinstance(expr, Var):
        yield expr.name
    elif isinstance(expr, Lit):
        yield from _value_names(expr.value)
    else:
        yield from _expr_idents(expr.left)
        yield from _expr_idents(expr.right)


def _collect_free(term: Term, bound: frozenset, names: set) -> None:
    def add(*idents: str) -> None:
        names.update(i for i in idents if i not in bound)

    if isinstance(term, (Invoke, Receive)):
        add(term.partner, term.operation)
    if isinstance(term, (Invoke, Call)):
        for arg in term.args:
            add(*_expr_idents(arg))
    if isinstance(term, Receive):
        for pattern in term.params:
            if isinstance(pattern, BindVar):
                add(pattern.name)
            else:
                add(*_value_names(pattern.value))
        _collect_free(term.continuation, bound, names)
    elif isinstance(term, (Parallel, Choice)):
        for branch in term.branches:
            _collect_free(branch, bound, names)
    elif isinstance(term, Delim):
        _collect_free(term.body, bound | {term.bound}, names)
    elif isinstance(term, Kill):
        add(term.label)
    elif isinstance(term, (Protect, Replicate)):
        _collect_free(term.body, bound, names)
