"""
Property tests: print/parse round trip and parser robustness
"""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cows_adapt.errors import CowsSyntaxError, ModelError
from cows_adapt.syntax import (
    NIL,
    BindVar,
    BoolVal,
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
    Parallel,
    Protect,
    Receive,
    Replicate,
    Var,
    parse_model,
    pretty_print,
    resolve_term,
)

NAMES = st.sampled_from(["a", "b", "c", "p", "q", "x"])
ENDPOINTS = st.sampled_from(["a", "b", "c", "p", "q"])

values = st.one_of(
    st.builds(IntVal, st.integers(-5, 99)),
    st.builds(BoolVal, st.booleans()),
    st.builds(NameVal, NAMES),
)
exprs = st.recursive(
    st.one_of(st.builds(Lit, values), st.builds(Var, NAMES)),
    lambda inner: st.builds(Gt, inner, inner),
    max_leaves=3,
)
patterns = st.one_of(st.builds(MatchVal, values), st.builds(BindVar, NAMES))
invokes = st.builds(Invoke, ENDPOINTS, ENDPOINTS, st.lists(exprs, max_size=3).map(tuple))


def receives(continuations):
    return st.builds(
        Receive, ENDPOINTS, ENDPOINTS, st.lists(patterns, max_size=2).map(tuple), continuations
    )


def _extend(inner):
    return st.one_of(
        receives(inner),
        st.builds(lambda left, right: Parallel((left, right)), inner, inner),
        st.builds(lambda first, second: Choice((first, second)), receives(inner), receives(inner)),
        st.builds(Delim, NAMES, st.just(DelimKind.NAME), inner, st.booleans()),
        st.builds(lambda body: Delim("k", DelimKind.KILL, Parallel((Kill("k"), body))), inner),
        st.builds(Protect, inner),
        st.builds(Replicate, inner),
    )


terms = st.recursive(st.one_of(st.just(NIL), invokes), _extend, max_leaves=10)


@st.composite
def models(draw):
    body = resolve_term(draw(terms), frozenset({"x"}), "f")
    main = resolve_term(draw(terms))
    return Model({"f": Definition("f", ("x",), body)}, main)


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(models())
def test_print_parse_round_trip(model):
    assert parse_model(pretty_print(model)) == model


def test_corpus_round_trip(tollbooth_model):
    printed = pretty_print(tollbooth_model)
    assert parse_model(printed) == tollbooth_model
    assert pretty_print(parse_model(printed)) == printed


@settings(max_examples=10_000, deadline=None)
@given(st.binary(max_size=200))
def test_parser_never_crashes_on_random_bytes(data):
    try:
        parse_model(data.decode("utf-8", errors="replace"))
    except (CowsSyntaxError, ModelError):
        pass


@settings(max_examples=2_000, deadline=None)
@given(st.text(alphabet="letinndkil()[]{}|*+.!?<>#,-0123 abcgtXk\n", max_size=80))
def test_parser_never_crashes_on_dialect_soup(text):
    try:
        parse_model(text)
    except (CowsSyntaxError, ModelError):
        pass
