"""
Structural operations on process terms: normal forms, kill halting,
definition unfolding and canonical naming of states.
"""

import itertools
import math
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, cast

from ..errors import EvaluationError, UnboundVariableError
from ..syntax.printer import format_value
from ..syntax.terms import (
    FRESH_SEP,
    NIL,
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
    Model,
    NameVal,
    Nil,
    Parallel,
    Pattern,
    Protect,
    Receive,
    Replicate,
    Term,
    Value,
    Var,
    base_name,
)
from .evaluation import eval_expr, free_names, rename_free, substitute

Counter = Iterator[int]


def parallel(branches) -> Term:
    """Parallel composition of ``branches`` with nil components and nesting removed."""
    flat: List[Term] = []
    for branch in branches:
        if isinstance(branch, Parallel):
            flat.extend(b for b in branch.branches if not isinstance(b, Nil))
        elif not isinstance(branch, Nil):
            flat.append(branch)
    if not flat:
        return NIL
    if len(flat) == 1:
        return flat[0]
    return Parallel(tuple(flat))


def halt(term: Term) -> Term:
    """
    Erase everything a kill removes.

    Protected bodies survive, unwrapped one level; delimitations, parallel
    composition and replication keep their structure around what survives.
    """
    if isinstance(term, Protect):
        return term.body
    if isinstance(term, Parallel):
        return parallel(halt(b) for b in term.branches)
    if isinstance(term, Delim):
        return Delim(term.bound, term.kind, halt(term.body), term.fresh)
    if isinstance(term, Replicate):
        return Replicate(halt(term.body))
    return NIL


# --- unfolding ----------------------------------------------------------------


def _freshen(term: Term, counter: Counter) -> Term:
    """Give every binder in ``term`` a name no other term uses."""
    if isinstance(term, Delim):
        fresh = f"{base_name(term.bound)}{FRESH_SEP}u{next(counter)}"
        body = rename_free(term.body, {term.bound: fresh})
        return Delim(fresh, term.kind, _freshen(body, counter), term.fresh)
    if isinstance(term, Receive):
        return Receive(
            term.partner, term.operation, term.params, _freshen(term.continuation, counter)
        )
    if isinstance(term, Parallel):
        return Parallel(tuple(_freshen(b, counter) for b in term.branches))
    if isinstance(term, Choice):
        return Choice(tuple(cast(Receive, _freshen(b, counter)) for b in term.branches))
    if isinstance(term, Protect):
        return Protect(_freshen(term.body, counter))
    if isinstance(term, Replicate):
        return Replicate(_freshen(term.body, counter))
    return term


def _partial_eval(expr: Expr) -> Expr:
    try:
        return Lit(eval_expr(expr, {}))
    except UnboundVariableError:
        return expr


def instantiate(model: Model, call: Call, counter: Optional[Counter] = None) -> Term:
    """
    Unfold a definition call.

    Arguments are evaluated as far as their variables allow; the definition
    body gets fresh binder names before its parameters are replaced.

    Raises:
        KeyError: the definition does not exist
        EvaluationError: an argument is ill-typed
    """
    definition = model.definition(call.name)
    args = [_partial_eval(a) for a in call.args]
    body = _freshen(definition.body, counter if counter is not None else itertools.count())
    return substitute(body, dict(zip(definition.params, args)))


def expand_active_calls(term: Term, model: Model, counter: Counter) -> Term:
    """
    Unfold every call that is not guarded by a receive.

    Calls whose arguments cannot be evaluated are left in place; the
    transition relation reports them. Terminates because unguarded recursion
    is rejected when a model is parsed.
    """
    if isinstance(term, Call):
        try:
            unfolded = instantiate(model, term, counter)
        except EvaluationError:
            return term
        return expand_active_calls(unfolded, model, counter)
    if isinstance(term, Parallel):
        return Parallel(tuple(expand_active_calls(b, model, counter) for b in term.branches))
    if isinstance(term, Delim):
        return Delim(
            term.bound, term.kind, expand_active_calls(term.body, model, counter), term.fresh
        )
    if isinstance(term, Protect):
        return Protect(expand_active_calls(term.body, model, counter))
    if isinstance(term, Replicate):
        return Replicate(expand_active_calls(term.body, model, counter))
    return term


# --- normal form --------------------------------------------------------------


def normalize(term: Term, model: Optional[Model] = None, counter: Optional[Counter] = None) -> Term:
    """
    Rewrite a term into structural normal form.

    Flattens parallel composition, drops nil components, vacuous and empty
    delimitations, ``{|nil|}`` and ``*nil``, collapses nested replication and
    narrows name and variable delimitations to the parallel components that
    mention the bound name. Nested protection is kept: each level survives one
    kill. With a model, calls under replication are unfolded.
    """
    if counter is None:
        counter = itertools.count()
    if isinstance(term, Receive):
        return Receive(
            term.partner, term.operation, term.params, normalize(term.continuation, model, counter)
        )
    if isinstance(term, Choice):
        branches = tuple(normalize(b, model, counter) for b in term.branches)
        return Choice(branches)  # type: ignore[arg-type]
    if isinstance(term, Parallel):
        return parallel(normalize(b, model, counter) for b in term.branches)
    if isinstance(term, Protect):
        body = normalize(term.body, model, counter)
        if isinstance(body, Nil):
            return body
        return Protect(body)
    if isinstance(term, Replicate):
        body = term.body
        if model is not None:
            body = expand_active_calls(body, model, counter)
        body = normalize(body, model, counter)
        if isinstance(body, (Nil, Replicate)):
            return body
        return Replicate(body)
    if isinstance(term, Delim):
        body = normalize(term.body, model, counter)
        if term.bound not in free_names(body):
            return body
        if term.kind is not DelimKind.KILL and isinstance(body, Parallel):
            inside = [b for b in body.branches if term.bound in free_names(b)]
            outside = [b for b in body.branches if term.bound not in free_names(b)]
            if outside:
                inner = Delim(term.bound, term.kind, parallel(inside), term.fresh)
                return parallel(outside + [inner])
        return Delim(term.bound, term.kind, body, term.fresh)
    return term


# --- canonical naming ---------------------------------------------------------

# Above this many candidate labellings of escaped names, a single labelling by
# first occurrence is used instead of the minimum over all of them.
_MAX_LABELLINGS = 720


def _key_name(name: str, env: Tuple[str, ...], escaped: Dict[str, str]) -> str:
    for distance, bound in enumerate(reversed(env)):
        if bound == name:
            return f"^{distance}"
    return escaped.get(name, name)


def _key_value(value: Value, env: Tuple[str, ...], escaped: Dict[str, str]) -> str:
    if isinstance(value, NameVal):
        return "'" + _key_name(value.name, env, escaped)
    return format_value(value)


def _key_expr(expr: Expr, env: Tuple[str, ...], escaped: Dict[str, str]) -> str:
    if isinstance(expr, Lit):
        return _key_value(expr.value, env, escaped)
    if isinstance(expr, Var):
        return "?" + _key_name(expr.name, env, escaped)
    return f"({_key_expr(expr.left, env, escaped)} gt {_key_expr(expr.right, env, escaped)})"


def _key_pattern(pattern: Pattern, env: Tuple[str, ...], escaped: Dict[str, str]) -> str:
    if isinstance(pattern, BindVar):
        return "?" + _key_name(pattern.name, env, escaped)
    return _key_value(pattern.value, env, escaped)


def _sort_key(term: Term, env: Tuple[str, ...], escaped: Dict[str, str]) -> str:
    """
    Order key of a term.

    Binders are encoded by base name and distance, escaped fresh names by
    their label in ``escaped``. Equal keys mean the terms differ at most in
    the indices of their binders.
    """
    def name(n: str) -> str:
        return _key_name(n, env, escaped)

    if isinstance(term, Nil):
        return "0"
    if isinstance(term, Invoke):
        args = ",".join(_key_expr(a, env, escaped) for a in term.args)
        return f"{name(term.partner)}.{name(term.operation)}!<{args}>"
    if isinstance(term, Receive):
        params = ",".join(_key_pattern(p, env, escaped) for p in term.params)
        cont = _sort_key(term.continuation, env, escaped)
        return f"{name(term.partner)}.{name(term.operation)}?<{params}>.{cont}"
    if isinstance(term, (Parallel, Choice)):
        parts = sorted(_sort_key(b, env, escaped) for b in term.branches)
        sep = "|" if isinstance(term, Parallel) else "+"
        return "(" + sep.join(parts) + ")"
    if isinstance(term, Delim):
        fresh = "#" if term.fresh else ""
        head = f"[{base_name(term.bound)}:{term.kind.value}{fresh}]"
        return head + _sort_key(term.body, env + (term.bound,), escaped)
    if isinstance(term, Kill):
        return f"kill({name(term.label)})"
    if isinstance(term, Protect):
        return "{|" + _sort_key(term.body, env, escaped) + "|}"
    if isinstance(term, Replicate):
        return "*" + _sort_key(term.body, env, escaped)
    if isinstance(term, Call):
        return f"{term.name}(" + ",".join(_key_expr(a, env, escaped) for a in term.args) + ")"
    raise TypeError(f"not a term: {term!r}")


def _sort(term: Term, env: Tuple[str, ...], escaped: Dict[str, str]) -> Term:
    """Order parallel components and choice branches by their key."""
    if isinstance(term, Parallel):
        branches = [_sort(b, env, escaped) for b in term.branches]
        branches.sort(key=lambda b: _sort_key(b, env, escaped))
        return Parallel(tuple(branches))
    if isinstance(term, Choice):
        choices = [_sort(b, env, escaped) for b in term.branches]
        choices.sort(key=lambda b: _sort_key(b, env, escaped))
        return Choice(tuple(choices))  # type: ignore[arg-type]
    if isinstance(term, Receive):
        continuation = _sort(term.continuation, env, escaped)
        return Receive(term.partner, term.operation, term.params, continuation)
    if isinstance(term, Delim):
        body = _sort(term.body, env + (term.bound,), escaped)
        return Delim(term.bound, term.kind, body, term.fresh)
    if isinstance(term, Protect):
        return Protect(_sort(term.body, env, escaped))
    if isinstance(term, Replicate):
        return Replicate(_sort(term.body, env, escaped))
    return term


def _labellings(names: List[str]) -> Iterator[Dict[str, str]]:
    """Every labelling of escaped names that keeps each base name's labels together."""
    groups: Dict[str, List[str]] = {}
    for n in names:
        groups.setdefault(base_name(n), []).append(n)
    per_group = [list(itertools.permutations(members)) for _, members in sorted(groups.items())]
    for choice in itertools.product(*per_group):
        labels: Dict[str, str] = {}
        for members in choice:
            for index, n in enumerate(members):
                labels[n] = f"{base_name(n)}{FRESH_SEP}{index}"
        yield labels


def _labelling_count(names: List[str]) -> int:
    counts: Dict[str, int] = {}
    for n in names:
        counts[base_name(n)] = counts.get(base_name(n), 0) + 1
    total = 1
    for count in counts.values():
        total *= math.factorial(count)
    return total


def _first_occurrence_labelling(term: Term, names: List[str]) -> Dict[str, str]:
    """Label escaped names by where they first occur, refined until stable."""
    masked = {n: f"{base_name(n)}{FRESH_SEP}" for n in names}
    labels = masked
    for _ in range(len(names) + 1):
        renamer = _Renamer()
        renamer.term(_sort(term, (), labels), {})
        ranked = [n for n in renamer.extruded if n in masked]
        refined = {n: f"{base_name(n)}{FRESH_SEP}{i}" for i, n in enumerate(ranked)}
        if refined == labels:
            break
        labels = refined
    return labels


class _Renamer:
    """Assigns ``base$N`` names to binders and extruded names in traversal order."""

    def __init__(self) -> None:
        self.count = 0
        self.extruded: Dict[str, str] = {}

    def _next(self, name: str) -> str:
        fresh = f"{base_name(name)}{FRESH_SEP}{self.count}"
        self.count += 1
        return fresh

    def name(self, name: str, scope: Dict[str, str]) -> str:
        if name in scope:
            return scope[name]
        if FRESH_SEP in name:
            if name not in self.extruded:
                self.extruded[name] = self._next(name)
            return self.extruded[name]
        return name

    def value(self, value: Value, scope: Dict[str, str]) -> Value:
        if isinstance(value, NameVal):
            return NameVal(self.name(value.name, scope))
        return value

    def expr(self, expr: Expr, scope: Dict[str, str]) -> Expr:
        if isinstance(expr, Lit):
            return Lit(self.value(expr.value, scope))
        if isinstance(expr, Var):
            return Var(self.name(expr.name, scope))
        left = self.expr(expr.left, scope)
        return Gt(left, self.expr(expr.right, scope))

    def pattern(self, pattern: Pattern, scope: Dict[str, str]) -> Pattern:
        if isinstance(pattern, BindVar):
            return BindVar(self.name(pattern.name, scope))
        return MatchVal(self.value(pattern.value, scope))

    def term(self, term: Term, scope: Dict[str, str]) -> Term:
        if isinstance(term, Invoke):
            partner = self.name(term.partner, scope)
            operation = self.name(term.operation, scope)
            return Invoke(partner, operation, tuple(self.expr(a, scope) for a in term.args))
        if isinstance(term, Receive):
            partner = self.name(term.partner, scope)
            operation = self.name(term.operation, scope)
            params = tuple(self.pattern(p, scope) for p in term.params)
            return Receive(partner, operation, params, self.term(term.continuation, scope))
        if isinstance(term, Parallel):
            return Parallel(tuple(self.term(b, scope) for b in term.branches))
        if isinstance(term, Choice):
            return Choice(tuple(cast(Receive, self.term(b, scope)) for b in term.branches))
        if isinstance(term, Delim):
            fresh = self._next(term.bound)
            inner = dict(scope)
            inner[term.bound] = fresh
            return Delim(fresh, term.kind, self.term(term.body, inner), term.fresh)
        if isinstance(term, Kill):
            return Kill(self.name(term.label, scope))
        if isinstance(term, Protect):
            return Protect(self.term(term.body, scope))
        if isinstance(term, Replicate):
            return Replicate(self.term(term.body, scope))
        if isinstance(term, Call):
            return Call(term.name, tuple(self.expr(a, scope) for a in term.args))
        return term


def canonicalize(term: Term, model: Optional[Model] = None) -> Tuple[Term, int]:
    """
    Canonical representative of a term's structural class.

    Fresh names that escaped their delimitation are free in the term, so
    their indices carry no meaning; the representative is the smallest result
    over the ways of labelling them.

    Returns:
        The canonical term and the number of canonical names it uses
    """
    normal = normalize(term, model)
    escaped = sorted(n for n in free_names(normal) if FRESH_SEP in n)
    if _labelling_count(escaped) <= _MAX_LABELLINGS:
        labellings: Iterable[Dict[str, str]] = _labellings(escaped)
    else:
        labellings = [_first_occurrence_labelling(normal, escaped)]

    best: Optional[Tuple[str, Term, int]] = None
    for labels in labellings:
        renamer = _Renamer()
        canonical = renamer.term(_sort(normal, (), labels), {})
        text = repr(canonical)
        if best is None or text < best[0]:
            best = (text, canonical, renamer.count)
    assert best is not None
    return best[1], best[2]
