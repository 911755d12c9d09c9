"""
Tests for the tollbooth scenario, its parameters and its service properties
"""

import pytest
from pydantic import ValidationError

from cows_adapt.errors import ScenarioError
from cows_adapt.logic import Verdict, check, parse_properties
from cows_adapt.scenario import (
    SCENARIOS,
    TollboothParams,
    build_tollbooth,
    render_scenario,
    render_tollbooth,
    tollbooth_properties,
)
from cows_adapt.syntax import parse_model


class TestParams:
    def test_defaults(self):
        assert TollboothParams().as_list() == [0, 4, 10, 60]

    def test_from_csv(self):
        params = TollboothParams.from_csv(" 5, 4,10 ,60")
        assert params == TollboothParams(adapt_estimate=5)

    def test_negative_values_are_allowed(self):
        assert TollboothParams.from_csv("-1,4,10,60").adapt_estimate == -1

    @pytest.mark.parametrize(
        "text, message",
        [
            ("1,2,3", "expects 4"),
            ("", "expects 4"),
            ("1,2,3,4,5", "expects 4"),
            ("a,b,c,d", "must be integers"),
            ("1,2,3,4.5", "must be integers"),
        ],
    )
    def test_malformed(self, text, message):
        with pytest.raises(ScenarioError, match=message):
            TollboothParams.from_csv(text)

    def test_fields_are_strict(self):
        with pytest.raises(ValidationError):
            TollboothParams(adapt_estimate="5")

    def test_frozen(self):
        params = TollboothParams()
        with pytest.raises(ValidationError):
            params.adapt_estimate = 3


class TestRendering:
    def test_defaults_reproduce_the_shipped_model(self, tollbooth_source):
        assert render_tollbooth() == tollbooth_source

    def test_build(self, tollbooth_model):
        assert build_tollbooth() == tollbooth_model

    def test_parameters_go_into_the_request(self):
        text = render_tollbooth(TollboothParams(exec_estimate=70))
        assert "serv.create!<0,4,70,60>" in text
        assert parse_model(text).definition("requestor")

    def test_registry(self, tollbooth_source):
        assert set(SCENARIOS) == {"tollbooth"}
        assert render_scenario("tollbooth") == tollbooth_source
        assert "serv.create!<5,4,10,60>" in render_scenario("tollbooth", "5,4,10,60")

    def test_unknown_scenario(self):
        with pytest.raises(ScenarioError, match="unknown scenario 'parking'"):
            render_scenario("parking")


class TestProperties:
    def test_builders_match_the_property_file(self, corpus_dir):
        text = (corpus_dir / "tollbooth.prop").read_text(encoding="utf-8")
        parsed = {p.name: p.formula for p in parse_properties(text)}
        assert parsed == tollbooth_properties()

    def verdicts(self, lts):
        return {name: check(lts, f).verdict for name, f in tollbooth_properties().items()}

    def test_default_request_is_served(self, tollbooth_lts):
        assert self.verdicts(tollbooth_lts) == {
            "responsiveness": Verdict.HOLDS,
            "availability": Verdict.HOLDS,
            "reliability": Verdict.HOLDS,
        }

    @pytest.mark.parametrize("fixture", ["late_adaptation_lts", "slow_execution_lts"])
    def test_failed_adaptation_is_not_reliable(self, request, fixture):
        assert self.verdicts(request.getfixturevalue(fixture)) == {
            "responsiveness": Verdict.HOLDS,
            "availability": Verdict.HOLDS,
            "reliability": Verdict.FAILS,
        }
