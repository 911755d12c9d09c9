"""
Bundled adaptation scenario and its service properties.
"""

from .properties import (
    availability_prop,
    reliability_prop,
    responsiveness_prop,
    tollbooth_properties,
)
from .registry import SCENARIOS, Scenario, render_scenario
from .tollbooth import TOLLBOOTH_TEMPLATE, TollboothParams, build_tollbooth, render_tollbooth

__all__ = [
    "SCENARIOS",
    "TOLLBOOTH_TEMPLATE",
    "Scenario",
    "TollboothParams",
    "availability_prop",
    "build_tollbooth",
    "reliability_prop",
    "render_scenario",
    "render_tollbooth",
    "responsiveness_prop",
    "tollbooth_properties",
]
