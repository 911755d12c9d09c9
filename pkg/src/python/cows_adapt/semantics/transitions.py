"""
One-step transition relation.

Every subterm contributes *moves*: exposed invokes and receives that may
still synchronise with something elsewhere, communications already formed
(with the bindings that still have to reach their variable delimitation),
pending kills, and finished steps. Moves travel towards the root and each
enclosing construct adjusts them: delimitations hide private endpoints,
extrude sent names, apply substitutions and complete kills; parallel
composition pairs invokes with receives and halts siblings of a kill;
replication keeps itself next to the residue.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from ..errors import EvaluationError, UnboundVariableError
from ..syntax.printer import format_term, format_value
from ..syntax.terms import (
    NIL,
    BindVar,
    Call,
    Choice,
    Delim,
    DelimKind,
    Invoke,
    Kill,
    MatchVal,
    Model,
    NameVal,
    Parallel,
    Pattern,
    Protect,
    Receive,
    Replicate,
    Term,
    Value,
    base_name,
)
from .evaluation import apply_substitution, eval_expr, match_patterns
from .structure import Counter, canonicalize, expand_active_calls, halt, instantiate, parallel

logger = logging.getLogger(__name__)


# --- labels -------------------------------------------------------------------


@dataclass(frozen=True)
class Comm:
    """A synchronisation between an invoke and a receive."""

    partner: str
    operation: str
    values: Tuple[Value, ...] = ()

    def __str__(self) -> str:
        values = ",".join(format_value(v) for v in self.values)
        return f"comm:{self.partner}.{self.operation}<{values}>"


@dataclass(frozen=True)
class KillEvt:
    label: str

    def __str__(self) -> str:
        return f"kill:{self.label}"


@dataclass(frozen=True)
class Tau:
    def __str__(self) -> str:
        return "tau"


Label = Union[Comm, KillEvt, Tau]
TAU = Tau()


def _visible_value(value: Value) -> Value:
    if isinstance(value, NameVal):
        return NameVal(base_name(value.name))
    return value


# --- configurations -----------------------------------------------------------


@dataclass(frozen=True)
class Config:
    """
    A state of a model: the current main term in canonical form.

    ``fresh_counter`` exceeds every canonical name index used in ``term``.
    Equality and hashing ignore the model.
    """

    model: Model = field(compare=False, repr=False)
    term: Term
    fresh_counter: int = 0

    @classmethod
    def of(cls, model: Model, term: Term) -> "Config":
        canonical, count = canonicalize(term, model)
        return cls(model, canonical, count)

    @classmethod
    def initial(cls, model: Model, keep_tau: bool = False) -> "Config":
        config = cls.of(model, model.main)
        return config if keep_tau else tau_closure(config)

    @cached_property
    def key(self) -> bytes:
        return repr(self.term).encode("utf-8")

    def __str__(self) -> str:
        return format_term(self.term)


def tau_closure(config: Config) -> Config:
    """Unfold every active definition call."""
    expanded = expand_active_calls(config.term, config.model, itertools.count())
    if expanded == config.term:
        return config
    return Config.of(config.model, expanded)


@dataclass(frozen=True)
class StuckExpr:
    """An invoke or call whose arguments cannot be evaluated."""

    reason: str
    site: str

    def __str__(self) -> str:
        return f"stuck expression: {self.reason} in {self.site}"


@dataclass
class StepResult:
    transitions: List[Tuple[Label, Config]] = field(default_factory=list)
    diagnostics: List[StuckExpr] = field(default_factory=list)

    def labels(self) -> List[Label]:
        return [label for label, _ in self.transitions]


# --- moves --------------------------------------------------------------------

Build = Callable[[Dict[str, Value]], Tuple[Term, Dict[str, Value]]]
Wrap = Callable[[Term], Term]


@dataclass(frozen=True)
class _Out:
    site: Tuple[int, ...]
    partner: str
    operation: str
    values: Tuple[Value, ...]
    residual: Term


@dataclass(frozen=True)
class _In:
    partner: str
    operation: str
    patterns: Tuple[Pattern, ...]
    build: Build


@dataclass(frozen=True)
class _Sync:
    site: Tuple[int, ...]
    partner: str
    operation: str
    values: Tuple[Value, ...]
    score: int
    pending: Tuple[Tuple[str, Value], ...]
    residual: Term


@dataclass(frozen=True)
class _KillPending:
    label: str
    residual: Term


@dataclass(frozen=True)
class _Done:
    label: Label
    residual: Term


@dataclass
class _Moves:
    outs: List[_Out] = field(default_factory=list)
    ins: List[_In] = field(default_factory=list)
    syncs: List[_Sync] = field(default_factory=list)
    kills: List[_KillPending] = field(default_factory=list)
    done: List[_Done] = field(default_factory=list)
    blocked: Set[str] = field(default_factory=set)
    stuck: List[StuckExpr] = field(default_factory=list)


def _wrap_build(build: Build, wrap: Wrap) -> Build:
    def wrapped(bindings: Dict[str, Value]) -> Tuple[Term, Dict[str, Value]]:
        residual, remaining = build(bindings)
        return wrap(residual), remaining

    return wrapped


def _wrap(moves: _Moves, wrap: Wrap, kill_wrap: Optional[Wrap] = None) -> _Moves:
    """Apply the same residual context to every move of a subterm."""
    kill_wrap = kill_wrap or wrap
    return _Moves(
        outs=[_Out(o.site, o.partner, o.operation, o.values, wrap(o.residual)) for o in moves.outs],
        ins=[
            _In(i.partner, i.operation, i.patterns, _wrap_build(i.build, wrap)) for i in moves.ins
        ],
        syncs=[
            _Sync(s.site, s.partner, s.operation, s.values, s.score, s.pending, wrap(s.residual))
            for s in moves.syncs
        ],
        kills=[_KillPending(k.label, kill_wrap(k.residual)) for k in moves.kills],
        done=[_Done(d.label, wrap(d.residual)) for d in moves.done],
        blocked=set(moves.blocked),
        stuck=list(moves.stuck),
    )


def _sync(out: _Out, inp: _In, residual: Callable[[Term, Term], Term]) -> Optional[_Sync]:
    if (out.partner, out.operation) != (inp.partner, inp.operation):
        return None
    match = match_patterns(inp.patterns, out.values)
    if match is None:
        return None
    receiver, remaining = inp.build(dict(match.bindings))
    return _Sync(
        out.site,
        out.partner,
        out.operation,
        out.values,
        match.literal_matches,
        tuple(sorted(remaining.items())),
        residual(out.residual, receiver),
    )


class _Stepper:
    def __init__(self, model: Model, keep_tau: bool) -> None:
        self.model = model
        self.keep_tau = keep_tau
        self.counter: Counter = itertools.count()

    def moves(self, term: Term, site: Tuple[int, ...]) -> _Moves:
        handler = getattr(self, "_" + type(term).__name__.lower(), None)
        if handler is None:
            return _Moves()
        return handler(term, site)

    def _invoke(self, term: Invoke, site: Tuple[int, ...]) -> _Moves:
        moves = _Moves()
        try:
            values = tuple(eval_expr(a, {}) for a in term.args)
        except UnboundVariableError as exc:
            moves.blocked.add(exc.name)
            return moves
        except EvaluationError as exc:
            moves.stuck.append(StuckExpr(str(exc), format_term(term)))
            return moves
        moves.outs.append(_Out(site, term.partner, term.operation, values, NIL))
        return moves

    @staticmethod
    def _receive_build(continuation: Term) -> Build:
        return lambda bindings: (continuation, bindings)

    def _receive(self, term: Receive, site: Tuple[int, ...]) -> _Moves:
        build = self._receive_build(term.continuation)
        return _Moves(ins=[_In(term.partner, term.operation, term.params, build)])

    def _choice(self, term: Choice, site: Tuple[int, ...]) -> _Moves:
        return _Moves(
            ins=[
                _In(b.partner, b.operation, b.params, self._receive_build(b.continuation))
                for b in term.branches
            ]
        )

    def _kill(self, term: Kill, site: Tuple[int, ...]) -> _Moves:
        return _Moves(kills=[_KillPending(term.label, NIL)])

    def _call(self, term: Call, site: Tuple[int, ...]) -> _Moves:
        moves = _Moves()
        try:
            unfolded = instantiate(self.model, term, self.counter)
        except EvaluationError as exc:
            moves.stuck.append(StuckExpr(str(exc), format_term(term)))
            return moves
        if self.keep_tau:
            moves.done.append(_Done(TAU, unfolded))
        return moves

    def _protect(self, term: Protect, site: Tuple[int, ...]) -> _Moves:
        return _wrap(self.moves(term.body, site + (0,)), Protect)

    def _replicate(self, term: Replicate, site: Tuple[int, ...]) -> _Moves:
        inner = self.moves(term.body, site + (0,))
        moves = _wrap(
            inner,
            lambda r: parallel((r, term)),
            lambda r: parallel((r, halt(term))),
        )
        # two copies of the body synchronising with each other
        for out in inner.outs:
            for inp in inner.ins:
                sync = _sync(out, inp, lambda o, i: parallel((o, i, term)))
                if sync is not None:
                    moves.syncs.append(sync)
        return moves

    def _parallel(self, term: Parallel, site: Tuple[int, ...]) -> _Moves:
        branches = term.branches
        children = [self.moves(b, site + (n,)) for n, b in enumerate(branches)]
        moves = _Moves()

        def replace(index: int) -> Wrap:
            return lambda r: Parallel(branches[:index] + (r,) + branches[index + 1:])

        for index, child in enumerate(children):
            halted = tuple(halt(b) for b in branches)

            def after_kill(r: Term, index: int = index, halted: tuple = halted) -> Term:
                return parallel(halted[:index] + (r,) + halted[index + 1:])

            wrapped = _wrap(child, replace(index), after_kill)
            moves.outs.extend(wrapped.outs)
            moves.ins.extend(wrapped.ins)
            moves.syncs.extend(wrapped.syncs)
            moves.kills.extend(wrapped.kills)
            moves.done.extend(wrapped.done)
            moves.blocked |= wrapped.blocked
            moves.stuck.extend(wrapped.stuck)

        for i, sender in enumerate(children):
            for j, receiver in enumerate(children):
                if i == j:
                    continue

                def both(o: Term, r: Term, i: int = i, j: int = j) -> Term:
                    updated = list(branches)
                    updated[i] = o
                    updated[j] = r
                    return Parallel(tuple(updated))

                for out in sender.outs:
                    for inp in receiver.ins:
                        sync = _sync(out, inp, both)
                        if sync is not None:
                            moves.syncs.append(sync)
        return moves

    def _delim(self, term: Delim, site: Tuple[int, ...]) -> _Moves:
        bound = term.bound
        inner = self.moves(term.body, site + (0,))

        def keep(r: Term) -> Term:
            return Delim(bound, term.kind, r, term.fresh)

        moves = _Moves(blocked=inner.blocked - {bound}, stuck=list(inner.stuck))

        for out in inner.outs:
            if bound in (out.partner, out.operation):
                continue
            if any(isinstance(v, NameVal) and v.name == bound for v in out.values):
                # the private name leaves its scope together with the message
                moves.outs.append(out)
            else:
                moves.outs.append(
                    _Out(out.site, out.partner, out.operation, out.values, keep(out.residual))
                )

        for inp in inner.ins:
            if bound in (inp.partner, inp.operation):
                continue
            if any(
                isinstance(p, MatchVal) and isinstance(p.value, NameVal) and p.value.name == bound
                for p in inp.patterns
            ):
                continue
            if term.kind is DelimKind.VAR and any(
                isinstance(p, BindVar) and p.name == bound for p in inp.patterns
            ):
                moves.ins.append(
                    _In(inp.partner, inp.operation, inp.patterns, _bind(inp.build, bound, keep))
                )
            else:
                moves.ins.append(
                    _In(inp.partner, inp.operation, inp.patterns, _wrap_build(inp.build, keep))
                )

        for sync in inner.syncs:
            pending = dict(sync.pending)
            if bound in pending:
                value = pending.pop(bound)
                residual = apply_substitution(sync.residual, {bound: value})
            else:
                residual = keep(sync.residual)
            moves.syncs.append(
                _Sync(
                    sync.site,
                    sync.partner,
                    sync.operation,
                    sync.values,
                    sync.score,
                    tuple(sorted(pending.items())),
                    residual,
                )
            )

        for kill in inner.kills:
            if kill.label == bound:
                moves.done.append(_Done(KillEvt(base_name(bound)), keep(kill.residual)))
            else:
                moves.kills.append(_KillPending(kill.label, keep(kill.residual)))

        moves.done.extend(_Done(d.label, keep(d.residual)) for d in inner.done)
        return moves


def _bind(build: Build, bound: str, keep: Wrap) -> Build:
    """Apply the binding of ``bound`` over its whole scope and drop the delimitation."""

    def bound_build(bindings: Dict[str, Value]) -> Tuple[Term, Dict[str, Value]]:
        residual, remaining = build(bindings)
        if bound not in remaining:
            return keep(residual), remaining
        rest = dict(remaining)
        value = rest.pop(bound)
        return apply_substitution(residual, {bound: value}), rest

    return bound_build


def _prioritise(syncs: Sequence[_Sync]) -> List[_Sync]:
    """Keep, per invoke occurrence, only the best-matching receives."""
    best: Dict[Tuple[int, ...], int] = {}
    for sync in syncs:
        best[sync.site] = max(best.get(sync.site, 0), sync.score)
    return [s for s in syncs if s.score == best[s.site]]


def enabled_transitions(config: Config, keep_tau: bool = False) -> StepResult:
    """
    All one-step successors of a configuration.

    Args:
        config: Current configuration
        keep_tau: Report definition unfolding as ``tau`` steps instead of
            unfolding calls eagerly; successors are then not tau-closed

    Returns:
        StepResult with (label, successor) pairs in a deterministic order and
        the StuckExpr diagnostics met on the way
    """
    if not keep_tau:
        config = tau_closure(config)
    stepper = _Stepper(config.model, keep_tau)
    moves = stepper.moves(config.term, ())

    def successor(term: Term) -> Config:
        result = Config.of(config.model, term)
        return result if keep_tau else tau_closure(result)

    result = StepResult(diagnostics=list(moves.stuck))
    for name in sorted(moves.blocked):
        result.diagnostics.append(
            StuckExpr(f"unbound variable {base_name(name)}", "top level")
        )

    for sync in _prioritise(moves.syncs):
        residual = sync.residual
        if sync.pending:
            residual = apply_substitution(residual, dict(sync.pending))
        label = Comm(
            base_name(sync.partner),
            base_name(sync.operation),
            tuple(_visible_value(v) for v in sync.values),
        )
        result.transitions.append((label, successor(residual)))

    for kill in moves.kills:
        result.transitions.append((KillEvt(base_name(kill.label)), successor(kill.residual)))
    for done in moves.done:
        result.transitions.append((done.label, successor(done.residual)))
    logger.debug("%d transition(s) enabled", len(result.transitions))
    return result


def exposed_receives(config: Config) -> FrozenSet[Tuple[str, str]]:
    """
    Endpoints on which the configuration can accept a message from outside.

    Literal patterns are not checked against values, except that a receive expecting a
    name still private to its scope is left out.
    """
    moves = _Stepper(config.model, keep_tau=False).moves(config.term, ())
    return frozenset((base_name(i.partner), base_name(i.operation)) for i in moves.ins)


def is_enabled(config: Config, partner: str, operation: str) -> bool:
    return (partner, operation) in exposed_receives(config)
