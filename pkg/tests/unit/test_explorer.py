"""
Tests for state-space exploration
"""

import pytest

from cows_adapt.explorer import Truncation, explore, export_aut
from cows_adapt.syntax import Model, Parallel, parse_model

DEFAULT_RUN = [
    "comm:serv.create<0,4,10,60>",
    "comm:p.adaptime<0,4,10,60>",
    "comm:i.selectgreater<false>",
    "comm:ser.checkOK<0,4,10,60>",
    "comm:q.exectime<10,60>",
    "comm:i.selectgreater<false>",
    "comm:ser.checkOK2<>",
    "comm:amadapt.launchOK<>",
    "comm:s.signalOK<>",
]


def run_labels(lts):
    return [str(label) for _, label, _ in lts.transitions]


class TestTollbooth:
    def test_counts(self, tollbooth_lts):
        assert tollbooth_lts.num_states == 10
        assert tollbooth_lts.num_transitions == 9
        assert tollbooth_lts.truncated is Truncation.NONE
        assert tollbooth_lts.is_sound()

    def test_single_successful_run(self, tollbooth_lts):
        assert run_labels(tollbooth_lts) == DEFAULT_RUN
        assert [(src, dst) for src, _, dst in tollbooth_lts.transitions] == [
            (n, n + 1) for n in range(9)
        ]
        assert tollbooth_lts.deadlocks() == {9}

    def test_no_diagnostics(self, tollbooth_lts):
        assert tollbooth_lts.diagnostics == []

    def test_late_adaptation_fails(self, late_adaptation_lts):
        assert late_adaptation_lts.num_states == 7
        assert run_labels(late_adaptation_lts) == [
            "comm:serv.create<5,4,10,60>",
            "comm:p.adaptime<5,4,10,60>",
            "comm:i.selectgreater<true>",
            "comm:ser.checkFail<>",
            "comm:ser.launchFail<repsvc>",
            "comm:s.signalFail<>",
        ]

    def test_slow_execution_fails(self, slow_execution_lts):
        assert slow_execution_lts.num_states == 10
        assert run_labels(slow_execution_lts)[-4:] == [
            "comm:i.selectgreater<true>",
            "comm:ser.checkFail2<>",
            "comm:ser.launchFail<repsvc>",
            "comm:s.signalFail<>",
        ]

    def test_every_check_outcome_is_reached(
        self, tollbooth_lts, late_adaptation_lts, slow_execution_lts
    ):
        seen = set()
        for lts in (tollbooth_lts, late_adaptation_lts, slow_execution_lts):
            seen |= {op for _, op in lts.comm_endpoints()}
        assert {"checkOK", "checkFail", "checkOK2", "checkFail2"} <= seen

    def test_worker_count_does_not_change_the_result(self, tollbooth_model):
        single = export_aut(explore(tollbooth_model, max_states=100, workers=1))
        threaded = export_aut(explore(tollbooth_model, max_states=100, workers=4))
        assert single == threaded

    def test_component_order_does_not_change_the_result(self, tollbooth_model, tollbooth_lts):
        branches = tuple(reversed(tollbooth_model.main.branches))
        permuted = Model(tollbooth_model.definitions, Parallel(branches))
        assert export_aut(explore(permuted, max_states=100)) == export_aut(tollbooth_lts)


class TestBounds:
    def test_state_bound(self, tollbooth_model):
        lts = explore(tollbooth_model, max_states=3)
        assert lts.num_states == 3
        assert lts.num_transitions == 2
        assert lts.truncated is Truncation.STATES
        assert not lts.is_sound()

    def test_depth_bound(self, tollbooth_model):
        lts = explore(tollbooth_model, max_states=100, max_depth=2)
        assert lts.num_states == 3
        assert lts.truncated is Truncation.DEPTH

    def test_depth_one_stops_after_the_first_step(self, tollbooth_model):
        lts = explore(tollbooth_model, max_states=100, max_depth=1)
        assert lts.num_states == 2
        assert lts.truncated is Truncation.DEPTH

    def test_depth_bound_reached_exactly_is_not_truncation(self, tollbooth_model):
        assert explore(tollbooth_model, max_states=100, max_depth=9).truncated is Truncation.NONE

    def test_truncated_prefixes_grow_monotonically(self, tollbooth_model):
        previous = set()
        for bound in range(1, 12):
            keys = {s.key for s in explore(tollbooth_model, max_states=bound).states}
            assert previous <= keys
            previous = keys
        assert len(previous) == 10

    @pytest.mark.parametrize(
        "kwargs",
        [{"max_states": 0}, {"max_states": 5, "max_depth": 0}, {"max_states": 5, "max_depth": -1}],
    )
    def test_invalid_bounds(self, tollbooth_model, kwargs):
        with pytest.raises(ValueError):
            explore(tollbooth_model, **kwargs)

    def test_default_bound_from_environment(self, tollbooth_model, monkeypatch):
        monkeypatch.setenv("COWS_ADAPT_MAX_STATES", "2")
        assert explore(tollbooth_model).num_states == 2


class TestSmallModels:
    def test_inert_model(self):
        lts = explore(parse_model("let f() = nil in f() end"))
        assert lts.num_states == 1
        assert lts.num_transitions == 0
        assert lts.deadlocks() == {0}

    def test_loop_is_folded(self):
        lts = explore(parse_model("let in * a.b?<>.a.b!<> | a.b!<> end"))
        assert lts.num_states == 1
        assert run_labels(lts) == ["comm:a.b<>"]

    def test_keep_tau(self):
        model = parse_model("let f() = a.b!<> in f() | a.b?<>.nil end")
        assert run_labels(explore(model, keep_tau=True)) == ["tau", "comm:a.b<>"]
        assert run_labels(explore(model)) == ["comm:a.b<>"]

    def test_stuck_expression_is_a_diagnostic(self):
        lts = explore(parse_model("let in a.b!<true gt 1> | a.b?<true>.nil end"))
        assert lts.num_states == 1
        assert len(lts.diagnostics) == 1
        assert lts.diagnostics[0].startswith("stuck expression:")
