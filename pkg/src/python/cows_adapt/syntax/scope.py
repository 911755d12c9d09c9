"""
Scope resolution for parsed terms.

The dialect writes every delimitation as ``[x]`` and every identifier the same
way, so the parser produces raw terms and this pass decides what each one is:

- ``[x#]`` is a private name; otherwise ``[x]`` delimits a kill label if a
  ``kill(x)`` occurs in its scope, a variable if ``x`` occurs in a receive
  pattern, and a private name in every other case.
- Identifiers bound by a variable delimitation or by a definition parameter
  are variables; all other identifiers are name values.

The pass is idempotent, so it also normalises hand-built terms.
"""

from typing import Dict, FrozenSet, Optional, Union, cast

from ..errors import ModelError
from .terms import (
    BindVar,
    Call,
    Choice,
    Delim,
    DelimKind,
    Expr,
    Gt,
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
    Var,
)

PARAM = "param"

Binding = Union[str, DelimKind]
Scope = Dict[str, Binding]


def _is_variable(scope: Scope, name: str) -> bool:
    return scope.get(name) in (PARAM, DelimKind.VAR)


def _mentions_kill(term: Term, name: str) -> bool:
    if isinstance(term, Kill):
        return term.label == name
    if isinstance(term, Delim):
        return term.bound != name and _mentions_kill(term.body, name)
    if isinstance(term, Receive):
        return _mentions_kill(term.continuation, name)
    if isinstance(term, (Parallel, Choice)):
        return any(_mentions_kill(b, name) for b in term.branches)
    if isinstance(term, (Protect, Replicate)):
        return _mentions_kill(term.body, name)
    return False


def _pattern_mentions(pattern: Pattern, name: str) -> bool:
    if isinstance(pattern, BindVar):
        return pattern.name == name
    return isinstance(pattern.value, NameVal) and pattern.value.name == name


def _mentions_binder(term: Term, name: str) -> bool:
    if isinstance(term, Receive):
        if any(_pattern_mentions(p, name) for p in term.params):
            return True
        return _mentions_binder(term.continuation, name)
    if isinstance(term, Delim):
        return term.bound != name and _mentions_binder(term.body, name)
    if isinstance(term, (Parallel, Choice)):
        return any(_mentions_binder(b, name) for b in term.branches)
    if isinstance(term, (Protect, Replicate)):
        return _mentions_binder(term.body, name)
    return False


def infer_kind(delim: Delim) -> DelimKind:
    if delim.fresh:
        return DelimKind.NAME
    if _mentions_kill(delim.body, delim.bound):
        return DelimKind.KILL
    if _mentions_binder(delim.body, delim.bound):
        return DelimKind.VAR
    return DelimKind.NAME


def _resolve_expr(expr: Expr, scope: Scope) -> Expr:
    if isinstance(expr, Gt):
        return Gt(_resolve_expr(expr.left, scope), _resolve_expr(expr.right, scope))
    if isinstance(expr, Var):
        return expr if _is_variable(scope, expr.name) else Lit(NameVal(expr.name))
    if isinstance(expr.value, NameVal) and _is_variable(scope, expr.value.name):
        return Var(expr.value.name)
    return expr


def _resolve_pattern(pattern: Pattern, scope: Scope) -> Pattern:
    if isinstance(pattern, BindVar):
        return pattern if _is_variable(scope, pattern.name) else MatchVal(NameVal(pattern.name))
    if isinstance(pattern.value, NameVal) and _is_variable(scope, pattern.value.name):
        return BindVar(pattern.value.name)
    return pattern


def _resolve(term: Term, scope: Scope, where: str) -> Term:
    if isinstance(term, Invoke):
        args = tuple(_resolve_expr(a, scope) for a in term.args)
        return Invoke(term.partner, term.operation, args)
    if isinstance(term, Receive):
        return Receive(
            term.partner,
            term.operation,
            tuple(_resolve_pattern(p, scope) for p in term.params),
            _resolve(term.continuation, scope, where),
        )
    if isinstance(term, Parallel):
        return Parallel(tuple(_resolve(b, scope, where) for b in term.branches))
    if isinstance(term, Choice):
        return Choice(tuple(cast(Receive, _resolve(b, scope, where)) for b in term.branches))
    if isinstance(term, Delim):
        kind = infer_kind(term)
        inner = dict(scope)
        inner[term.bound] = kind
        return Delim(term.bound, kind, _resolve(term.body, inner, where), term.fresh)
    if isinstance(term, Kill):
        if scope.get(term.label) not in (DelimKind.KILL, PARAM):
            raise ModelError(f"kill label {term.label!r} is not delimited in {where}")
        return term
    if isinstance(term, Protect):
        return Protect(_resolve(term.body, scope, where))
    if isinstance(term, Replicate):
        return Replicate(_resolve(term.body, scope, where))
    if isinstance(term, Call):
        return Call(term.name, tuple(_resolve_expr(a, scope) for a in term.args))
    return term


def resolve_term(
    term: Term, params: FrozenSet[str] = frozenset(), where: Optional[str] = None
) -> Term:
    """
    Resolve identifiers and delimitation kinds of a raw term.

    Args:
        term: Term as produced by the parser (or built by hand)
        params: Parameter names of the enclosing definition
        where: Context used in error messages

    Returns:
        The resolved term

    Raises:
        ModelError: a kill label is not delimited
    """
    scope: Scope = {p: PARAM for p in params}
    return _resolve(term, scope, where or "main")
