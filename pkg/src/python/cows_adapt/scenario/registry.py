"""
Named scenarios the command line can render.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional

from ..errors import ScenarioError
from .tollbooth import TollboothParams, render_tollbooth


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    render: Callable[[Optional[str]], str]


def _tollbooth(params: Optional[str]) -> str:
    if params is None:
        return render_tollbooth(TollboothParams())
    return render_tollbooth(TollboothParams.from_csv(params))


SCENARIOS: Dict[str, Scenario] = {
    "tollbooth": Scenario(
        "tollbooth",
        "adaptation manager serving a car at a tollbooth",
        _tollbooth,
    ),
}


def render_scenario(name: str, params: Optional[str] = None) -> str:
    """
    Model text of a registered scenario.

    Args:
        name: Scenario name
        params: Comma-separated parameters; scenario defaults when None

    Raises:
        ScenarioError: unknown name or malformed parameters
    """
    scenario = SCENARIOS.get(name)
    if scenario is None:
        known = ", ".join(sorted(SCENARIOS))
        raise ScenarioError(f"unknown scenario {name!r} (known: {known})")
    return scenario.render(params)
