"""
Property tests for the step relation and canonical keys.

The main check compares one-step successors of random replication-free systems
against a direct enumeration over their structure. Systems mix invokes with one
or two arguments, receive choices whose continuations use the bound variables,
private names sent out of their scope, nested kill scopes and nested
protection. The enumeration predicts every successor as model text; both sides
are compared through canonical keys.

The remaining checks cover canonical forms under renaming and reordering, kill
soundness over whole explorations and replicated services surviving each step.
"""

import itertools
import random
from collections import Counter
from typing import Dict, Iterator, NamedTuple, Optional, Tuple, Union

from hypothesis import given, settings
from hypothesis import strategies as st

from cows_adapt.explorer import explore
from cows_adapt.semantics import Comm, Config, KillEvt, canonicalize, enabled_transitions, normalize
from cows_adapt.semantics.evaluation import free_names, rename_free
from cows_adapt.syntax import (
    Choice,
    Delim,
    DelimKind,
    Parallel,
    Protect,
    Receive,
    Replicate,
    parse_model,
    term_shape,
)
from cows_adapt.syntax.terms import FRESH_SEP, Term, base_name

ARITY = {"b": 1, "c": 2}
VARIABLES = ("X", "Y")
LITERALS = (0, 1)


class Ref(NamedTuple):
    """A receive variable, by argument position."""

    position: int


Arg = Union[int, str, Ref]


class Inv(NamedTuple):
    op: str
    args: Tuple[Arg, ...]


class Branch(NamedTuple):
    op: str
    patterns: Tuple[Union[int, Ref], ...]
    continuation: Optional[Inv]


class Rcv(NamedTuple):
    branches: Tuple[Branch, ...]


class Private(NamedTuple):
    name: str
    invoke: Inv


class Prot(NamedTuple):
    body: "Node"


class Scope(NamedTuple):
    label: str
    members: Tuple["Node", ...]
    alive: bool = True


# None is the inactive term
Node = Union[None, Inv, Rcv, Private, Prot, Scope]
Path = Tuple[int, ...]


# --- generation ---------------------------------------------------------------


def draw_invoke(draw, extra=()) -> Inv:
    op = draw(st.sampled_from(sorted(ARITY)))
    args = tuple(draw(st.sampled_from(LITERALS + tuple(extra))) for _ in range(ARITY[op]))
    return Inv(op, args)


def draw_branch(draw) -> Branch:
    op = draw(st.sampled_from(sorted(ARITY)))
    patterns = tuple(
        draw(st.one_of(st.sampled_from(LITERALS), st.just(Ref(i)))) for i in range(ARITY[op])
    )
    bound = [p for p in patterns if isinstance(p, Ref)]
    continuation = draw_invoke(draw, bound) if draw(st.booleans()) else None
    return Branch(op, patterns, continuation)


def draw_node(draw, depth: int, labels: Iterator[int]) -> Node:
    kinds = ["invoke", "receive"]
    if depth < 3:
        kinds += ["protect", "scope", "private"]
    kind = draw(st.sampled_from(kinds))
    if kind == "invoke":
        return draw_invoke(draw)
    if kind == "receive":
        return Rcv(tuple(draw_branch(draw) for _ in range(draw(st.integers(1, 2)))))
    if kind == "protect":
        return Prot(draw_node(draw, depth + 1, labels))
    if kind == "private":
        name = f"n{next(labels)}"
        invoke = draw_invoke(draw)
        position = draw(st.integers(0, len(invoke.args) - 1))
        args = invoke.args[:position] + (name,) + invoke.args[position + 1:]
        return Private(name, Inv(invoke.op, args))
    label = f"k{next(labels)}"
    size = draw(st.integers(1, 3))
    return Scope(label, tuple(draw_node(draw, depth + 1, labels) for _ in range(size)))


@st.composite
def systems(draw):
    labels = itertools.count()
    return tuple(draw_node(draw, 0, labels) for _ in range(draw(st.integers(1, 4))))


# --- rendering ----------------------------------------------------------------


def render_arg(arg: Arg) -> str:
    if isinstance(arg, Ref):
        return VARIABLES[arg.position]
    return str(arg)


def render_invoke(invoke: Inv) -> str:
    return f"a.{invoke.op}!<{','.join(render_arg(a) for a in invoke.args)}>"


def render(node: Node) -> str:
    if node is None:
        return "nil"
    if isinstance(node, Inv):
        return render_invoke(node)
    if isinstance(node, Private):
        return f"[{node.name}] {render_invoke(node.invoke)}"
    if isinstance(node, Rcv):
        body = " + ".join(
            f"a.{b.op}?<{','.join(render_arg(p) for p in b.patterns)}>."
            + (render_invoke(b.continuation) if b.continuation else "nil")
            for b in node.branches
        )
        used = sorted({p.position for b in node.branches for p in b.patterns if isinstance(p, Ref)})
        return "".join(f"[{VARIABLES[i]}] " for i in used) + f"({body})"
    if isinstance(node, Prot):
        return "{| " + render(node.body) + " |}"
    parts = [render(m) for m in node.members]
    if not node.alive:
        return "(" + " | ".join(parts) + ")"
    return f"[{node.label}] (kill({node.label}) | " + " | ".join(parts) + ")"


def source(system: Tuple[Node, ...]) -> str:
    return "let in " + " | ".join(render(n) for n in system) + " end"


# --- reference semantics ------------------------------------------------------


def sites(node: Node, path: Path) -> Iterator[Tuple[Path, Node]]:
    if isinstance(node, (Inv, Rcv, Private)):
        yield path, node
    elif isinstance(node, Prot):
        yield from sites(node.body, path + (0,))
    elif isinstance(node, Scope):
        yield path, node
        for index, member in enumerate(node.members):
            yield from sites(member, path + (index,))


def all_sites(system: Tuple[Node, ...]) -> Iterator[Tuple[Path, Node]]:
    for index, node in enumerate(system):
        yield from sites(node, (index,))


def replace_in(node: Node, path: Path, new: Node) -> Node:
    if not path:
        return new
    if isinstance(node, Prot):
        return Prot(replace_in(node.body, path[1:], new))
    members = list(node.members)
    members[path[0]] = replace_in(members[path[0]], path[1:], new)
    return node._replace(members=tuple(members))


def replace(system: Tuple[Node, ...], path: Path, new: Node) -> Tuple[Node, ...]:
    updated = list(system)
    updated[path[0]] = replace_in(updated[path[0]], path[1:], new)
    return tuple(updated)


def halt(node: Node) -> Node:
    """Unprotected activity goes; protected activity stays, unwrapped once."""
    if isinstance(node, Prot):
        return node.body
    if isinstance(node, Scope):
        return Scope(node.label, tuple(halt(m) for m in node.members), alive=False)
    return None


def match(patterns, values) -> Optional[Dict[int, Arg]]:
    bindings = {}
    for position, (pattern, value) in enumerate(zip(patterns, values)):
        if isinstance(pattern, Ref):
            bindings[position] = value
        elif not isinstance(value, int) or value != pattern:
            return None
    return bindings


def expected_steps(system: Tuple[Node, ...]):
    """Yield (label, successor system, name that left its scope) triples."""
    found = list(all_sites(system))
    receives = [(path, node) for path, node in found if isinstance(node, Rcv)]

    for invoke_path, node in found:
        if not isinstance(node, (Inv, Private)):
            continue
        invoke = node.invoke if isinstance(node, Private) else node
        candidates = []
        for receive_path, receive in receives:
            for branch in receive.branches:
                if branch.op != invoke.op:
                    continue
                bindings = match(branch.patterns, invoke.args)
                if bindings is None:
                    continue
                score = sum(1 for p in branch.patterns if not isinstance(p, Ref))
                candidates.append((score, receive_path, branch, bindings))
        if not candidates:
            continue
        best = max(c[0] for c in candidates)
        label = f"comm:a.{invoke.op}<{','.join(str(a) for a in invoke.args)}>"
        escaped = node.name if isinstance(node, Private) else None
        for score, receive_path, branch, bindings in candidates:
            if score != best:
                continue
            continuation = None
            if branch.continuation is not None:
                args = tuple(
                    bindings[a.position] if isinstance(a, Ref) else a
                    for a in branch.continuation.args
                )
                continuation = Inv(branch.continuation.op, args)
            successor = replace(replace(system, invoke_path, None), receive_path, continuation)
            yield label, successor, escaped

    for path, node in found:
        if isinstance(node, Scope) and node.alive:
            yield f"kill:{node.label}", replace(system, path, halt(node)), None


def state_key(system: Tuple[Node, ...], escaped: Optional[str]) -> bytes:
    model = parse_model(source(system))
    term = model.main
    if escaped is not None:
        term = rename_free(term, {escaped: f"{escaped}$out"})
    return Config.of(model, term).key


@settings(max_examples=500, deadline=None)
@given(systems())
def test_successors_match_enumeration(system):
    model = parse_model(source(system))
    result = enabled_transitions(Config.initial(model))

    actual = Counter((str(label), config.key) for label, config in result.transitions)
    expected = Counter(
        (label, state_key(successor, escaped))
        for label, successor, escaped in expected_steps(system)
    )
    assert actual == expected
    assert result.diagnostics == []


# --- canonical forms ----------------------------------------------------------


def components(term: Term) -> Tuple[Term, ...]:
    return term.branches if isinstance(term, Parallel) else (term,)


def open_private_names(term: Term) -> Term:
    """Drop top-level name delimitations, leaving escaped names that share one base name."""
    opened = []
    for index, part in enumerate(components(term)):
        if isinstance(part, Delim) and part.kind is DelimKind.NAME:
            part = rename_free(part.body, {part.bound: f"n{FRESH_SEP}e{index}"})
        opened.append(part)
    return opened[0] if len(opened) == 1 else Parallel(tuple(opened))


def scramble(term: Term, rng: random.Random, counter: Iterator[int]) -> Term:
    """Rename every binder to a fresh name and shuffle parallel parts and choice branches."""
    if isinstance(term, Delim):
        fresh = f"{base_name(term.bound)}{FRESH_SEP}r{next(counter)}"
        body = rename_free(term.body, {term.bound: fresh})
        return Delim(fresh, term.kind, scramble(body, rng, counter), term.fresh)
    if isinstance(term, (Parallel, Choice)):
        branches = [scramble(b, rng, counter) for b in term.branches]
        rng.shuffle(branches)
        return type(term)(tuple(branches))
    if isinstance(term, Receive):
        continuation = scramble(term.continuation, rng, counter)
        return Receive(term.partner, term.operation, term.params, continuation)
    if isinstance(term, (Protect, Replicate)):
        return type(term)(scramble(term.body, rng, counter))
    return term


@settings(max_examples=300, deadline=None)
@given(systems(), st.randoms(use_true_random=False), st.booleans())
def test_canonical_form_ignores_binder_names_and_order(system, rng, escape):
    term = parse_model(source(system)).main
    if escape:
        term = open_private_names(term)
    escaped = sorted(n for n in free_names(term) if FRESH_SEP in n)
    indices = rng.sample(range(100), len(escaped))
    relabelled = rename_free(
        term, {n: f"{base_name(n)}{FRESH_SEP}e{i}" for n, i in zip(escaped, indices)}
    )
    scrambled = scramble(relabelled, rng, itertools.count(rng.randrange(1000)))
    assert canonicalize(scrambled) == canonicalize(term)


# --- kill soundness -----------------------------------------------------------

KINDS = st.sampled_from(["invoke", "receive"])


def activity(kind: str, op: str) -> str:
    return f"a.{op}!<1>" if kind == "invoke" else f"a.{op}?<1>.nil"


def partner_for(kind: str, op: str) -> str:
    return activity("receive" if kind == "invoke" else "invoke", op)


@st.composite
def kill_scopes(draw):
    """
    A kill scope [k] holding unprotected activities on x-operations, protected
    ones on p-operations and, optionally, a protected inner scope [j] whose
    unprotected activities use y-operations. Each activity has one partner
    outside the scopes.
    """
    groups = {
        "x": draw(st.lists(KINDS, min_size=1, max_size=3)),
        "p": draw(st.lists(KINDS, max_size=2)),
        "y": draw(st.lists(KINDS, max_size=2)),
    }
    guarded = draw(st.booleans())
    members = ["a.go?<>.kill(k)" if guarded else "kill(k)"]
    members += [activity(kind, f"x{i}") for i, kind in enumerate(groups["x"])]
    members += ["{| " + activity(kind, f"p{i}") + " |}" for i, kind in enumerate(groups["p"])]
    if groups["y"]:
        inner = ["kill(j)"] + [activity(kind, f"y{i}") for i, kind in enumerate(groups["y"])]
        members.append("{| [j] (" + " | ".join(inner) + ") |}")
    outside = [
        partner_for(kind, f"{g}{i}") for g, kinds in groups.items() for i, kind in enumerate(kinds)
    ]
    if guarded:
        outside.append("a.go!<>")
    text = "let in [k] (" + " | ".join(members) + ") | " + " | ".join(outside) + " end"
    survivors = {f"{g}{i}" for g in ("p", "y") for i in range(len(groups[g]))}
    return text, guarded, survivors


def reachable_operations(successors, start: int) -> set:
    seen, stack, operations = {start}, [start], set()
    while stack:
        for label, target in successors[stack.pop()]:
            if isinstance(label, Comm):
                operations.add(label.operation)
            if target not in seen:
                seen.add(target)
                stack.append(target)
    return operations


@settings(max_examples=200, deadline=None)
@given(kill_scopes())
def test_killed_activities_never_communicate_again(scenario):
    text, guarded, survivors = scenario
    lts = explore(parse_model(text))
    successors = lts.successors()
    assert lts.is_sound()

    kills = [(src, label, dst) for src, label, dst in lts.transitions if isinstance(label, KillEvt)]
    assert any(label.label == "k" for _, label, _ in kills)
    for src, label, dst in kills:
        silenced = "x" if label.label == "k" else "y"
        assert not any(op.startswith(silenced) for op in reachable_operations(successors, dst))
        if label.label == "k" and src == lts.initial and not guarded:
            enabled = {lbl.operation for lbl, _ in successors[dst] if isinstance(lbl, Comm)}
            assert survivors <= enabled


# --- replication --------------------------------------------------------------


@st.composite
def replicated_services(draw):
    labels = itertools.count()
    service = draw_node(draw, 1, labels)
    others = [draw_node(draw, 1, labels) for _ in range(draw(st.integers(0, 3)))]
    return "let in " + " | ".join([f"* ({render(service)})"] + [render(n) for n in others]) + " end"


@settings(max_examples=300, deadline=None)
@given(replicated_services())
def test_replicated_service_survives_every_step(text):
    model = parse_model(text)
    service = components(model.main)[0]
    assert isinstance(service, Replicate)
    expected = term_shape(normalize(service, model), unordered=True)

    result = enabled_transitions(Config.initial(model))
    assert result.diagnostics == []
    for _, config in result.transitions:
        shapes = {term_shape(part, unordered=True) for part in components(config.term)}
        assert expected in shapes
