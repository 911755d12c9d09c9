"""
Service properties of the adaptation manager as formulas.
"""

from typing import Dict

from ..logic.formulas import AF, AG, EF, TRUE, ActionPattern, Box, Diamond, Enabled, Formula, Or

REQUEST = ActionPattern("serv", "create")
SUCCESS = ActionPattern("s", "signalOK")
FAILURE = ActionPattern("s", "signalFail")


def responsiveness_prop() -> Formula:
    """Every accepted request is eventually answered, with success or failure."""
    answered = Or(Diamond(SUCCESS, TRUE), Diamond(FAILURE, TRUE))
    return AG(Box(REQUEST, AF(answered)))


def availability_prop() -> Formula:
    """The manager can accept a request in every reachable state."""
    return AG(Enabled(REQUEST.partner, REQUEST.operation))


def reliability_prop() -> Formula:
    """After any accepted request a successful answer is still reachable."""
    return AG(Box(REQUEST, EF(Diamond(SUCCESS, TRUE))))


def tollbooth_properties() -> Dict[str, Formula]:
    return {
        "responsiveness": responsiveness_prop(),
        "availability": availability_prop(),
        "reliability": reliability_prop(),
    }
