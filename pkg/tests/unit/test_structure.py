"""
Tests for normal forms, halting, unfolding and canonical naming
"""

import itertools

from cows_adapt.semantics.structure import (
    canonicalize,
    expand_active_calls,
    halt,
    instantiate,
    normalize,
    parallel,
)
from cows_adapt.syntax import (
    Call,
    Delim,
    DelimKind,
    IntVal,
    Invoke,
    Lit,
    NameVal,
    Parallel,
    Protect,
    Receive,
    Replicate,
    Var,
    parse_model,
)
from cows_adapt.syntax.terms import NIL, FRESH_SEP, walk

A = Invoke("a", "b", ())
B = Invoke("c", "d", ())


class TestParallel:
    def test_flattens_and_drops_nil(self):
        assert parallel([NIL, Parallel((A, NIL)), B]) == Parallel((A, B))

    def test_single_component(self):
        assert parallel([NIL, A]) == A

    def test_empty(self):
        assert parallel([]) == NIL


class TestHalt:
    def test_unprotected_activity_is_removed(self):
        assert halt(Parallel((A, Receive("a", "b", (), B)))) == NIL

    def test_protection_survives_unwrapped(self):
        assert halt(Parallel((A, Protect(B)))) == B

    def test_nested_protection_survives_one_level(self):
        assert halt(Protect(Protect(B))) == Protect(B)

    def test_structure_around_survivors_is_kept(self):
        term = Delim("n", DelimKind.NAME, Parallel((A, Protect(B))))
        assert halt(term) == Delim("n", DelimKind.NAME, B)

    def test_replication(self):
        assert halt(Replicate(Protect(B))) == Replicate(B)


class TestNormalize:
    def test_vacuous_delimitation_is_dropped(self):
        assert normalize(Delim("K", DelimKind.NAME, A)) == A

    def test_protected_nil(self):
        assert normalize(Protect(Parallel((NIL, NIL)))) == NIL

    def test_nested_protection_is_kept(self):
        assert normalize(Protect(Protect(A))) == Protect(Protect(A))
        assert normalize(Protect(Protect(NIL))) == NIL

    def test_replicated_nil(self):
        assert normalize(Replicate(NIL)) == NIL

    def test_delimitation_is_narrowed(self):
        private = Invoke("n", "o", ())
        term = Delim("n", DelimKind.NAME, Parallel((A, private)))
        assert normalize(term) == Parallel((A, Delim("n", DelimKind.NAME, private)))

    def test_kill_scope_is_not_narrowed(self):
        model = parse_model("let in [k] (kill(k) | a.b!<>) end")
        assert normalize(model.main) == model.main


class TestUnfolding:
    def test_instantiate_substitutes_arguments(self):
        model = parse_model("let f(s, n) = s.o!<n> in f(serv, 3) end")
        assert instantiate(model, model.main) == Invoke("serv", "o", (Lit(IntVal(3)),))

    def test_instantiate_freshens_binders(self):
        model = parse_model("let f() = [x] a.b?<x>.nil in f() | f() end")
        counter = itertools.count()
        first = instantiate(model, model.main.branches[0], counter)
        second = instantiate(model, model.main.branches[1], counter)
        assert first.bound != second.bound
        assert first.bound.split(FRESH_SEP)[0] == "x"

    def test_variable_arguments_stay_symbolic(self):
        model = parse_model("let g(v) = a.b!<v> f() = [X] c.d?<X>.g(X) in f() end")
        body = model.definition("f").body
        call = body.body.continuation
        assert isinstance(call, Call)
        assert instantiate(model, call) == Invoke("a", "b", (Var("X"),))

    def test_expand_active_calls_stops_at_receives(self):
        model = parse_model("let f() = a.b?<>.f() in f() end")
        expanded = expand_active_calls(model.main, model, iter(range(100)))
        assert expanded == Receive("a", "b", (), Call("f", ()))


class TestCanonicalize:
    def test_component_order_does_not_matter(self):
        left, _ = canonicalize(Parallel((A, B)))
        right, _ = canonicalize(Parallel((B, A)))
        assert left == right

    def test_binder_indices_do_not_matter(self):
        first = Delim("x$u3", DelimKind.NAME, Invoke("x$u3", "o", ()))
        second = Delim("x$u9", DelimKind.NAME, Invoke("x$u9", "o", ()))
        assert canonicalize(first)[0] == canonicalize(second)[0]
        assert canonicalize(first)[0].bound == "x$0"

    def test_binders_get_indexed_base_names(self):
        term, count = canonicalize(parse_model("let in [i#] i.o!<> | [j] j.o!<> end").main)
        binders = sorted(n.bound for n in walk(term) if isinstance(n, Delim))
        assert binders == ["i$0", "j$1"] or binders == ["i$1", "j$0"]
        assert count == 2

    def test_escaped_name_indices_do_not_matter(self):
        def system(receiver):
            return Parallel(
                (Invoke("n$3", "o", ()), Invoke("n$5", "o", ()), Receive(receiver, "r", (), NIL))
            )

        first, first_count = canonicalize(system("n$3"))
        second, second_count = canonicalize(system("n$5"))
        assert first == second
        assert first_count == second_count == 2

    def test_escaped_names_are_told_apart(self):
        shared = Parallel((Invoke("n$3", "o", ()), Receive("n$3", "r", (), NIL)))
        split = Parallel((Invoke("n$3", "o", ()), Receive("n$5", "r", (), NIL)))
        assert canonicalize(shared)[0] != canonicalize(split)[0]

    def test_extruded_names_are_renamed(self):
        term, count = canonicalize(Invoke("a", "b", (Lit(NameVal("n$u7")),)))
        assert term == Invoke("a", "b", (Lit(NameVal("n$0")),))
        assert count == 1

    def test_replicated_calls_are_unfolded(self):
        model = parse_model("let f() = a.b?<>.nil in * f() end")
        term, _ = canonicalize(model.main, model)
        assert term == Replicate(Receive("a", "b", (), NIL))

    def test_idempotent(self, tollbooth_model):
        once, _ = canonicalize(tollbooth_model.main, tollbooth_model)
        twice, _ = canonicalize(once, tollbooth_model)
        assert once == twice
