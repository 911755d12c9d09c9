"""
Aldebaran (.aut) export and import.

Format::

    des (<initial>,<transitions>,<states>)
    (<src>,"<label>",<dst>)
    ...

Labels are rendered ``comm:partner.operation<v1,...,vn>``, ``kill:k`` or ``tau``.
"""

import logging
import re
from typing import List, Tuple

from ..errors import AutFormatError
from ..semantics.transitions import TAU, Comm, KillEvt, Label
from ..syntax.terms import BoolVal, IntVal, NameVal, Value, is_valid_name
from .lts import CanonicalState, Lts, Transition

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*\Z")
_TRANSITION = re.compile(r'\(\s*(\d+)\s*,\s*(?:"([^"]*)"|([^,"()]+))\s*,\s*(\d+)\s*\)\s*\Z')
_COMM = re.compile(r"comm:([A-Za-z][A-Za-z0-9_]*)\.([A-Za-z][A-Za-z0-9_]*)<(.*)>\Z")
_INT = re.compile(r"-?[0-9]+\Z")


def export_aut(lts: Lts) -> str:
    """Render an Lts as Aldebaran text; the output is byte-stable for a given Lts."""
    if not lts.is_sound():
        logger.warning("exporting a truncated state space (%s bound)", lts.truncated.value)
    lines = [f"des ({lts.initial},{lts.num_transitions},{lts.num_states})"]
    lines.extend(f'({src},"{label}",{dst})' for src, label, dst in lts.transitions)
    return "\n".join(lines) + "\n"


def _parse_value(text: str, line: int) -> Value:
    text = text.strip()
    if _INT.match(text):
        return IntVal(int(text))
    if text in ("true", "false"):
        return BoolVal(text == "true")
    if is_valid_name(text):
        return NameVal(text)
    raise AutFormatError(f"bad value {text!r} in label", line)


def parse_label(text: str, line: int = 0) -> Label:
    """Inverse of ``str(label)``."""
    text = text.strip()
    if text == "tau":
        return TAU
    if text.startswith("kill:"):
        name = text[len("kill:"):]
        if not is_valid_name(name):
            raise AutFormatError(f"bad kill label {text!r}", line)
        return KillEvt(name)
    match = _COMM.match(text)
    if match is None:
        raise AutFormatError(f"unrecognised label {text!r}", line)
    partner, operation, body = match.groups()
    values: Tuple[Value, ...] = ()
    if body.strip():
        values = tuple(_parse_value(v, line) for v in body.split(","))
    return Comm(partner, operation, values)


def import_aut(text: str) -> Lts:
    """
    Read Aldebaran text back into an Lts.

    The states of the result carry no configuration, so state predicates
    that need the term cannot be evaluated on it.

    Raises:
        AutFormatError: malformed header or transition line, or counts and
            indices that do not agree with the header
    """
    lines = [(n, raw.strip()) for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [(n, raw) for n, raw in lines if raw]
    if not lines:
        raise AutFormatError("empty input")

    header_line, header = lines[0]
    match = _HEADER.match(header)
    if match is None:
        raise AutFormatError(f"bad header {header!r}", header_line)
    initial, num_transitions, num_states = (int(g) for g in match.groups())
    if num_states < 1 or initial >= num_states:
        raise AutFormatError("initial state out of range", header_line)

    transitions: List[Transition] = []
    for number, raw in lines[1:]:
        found = _TRANSITION.match(raw)
        if found is None:
            raise AutFormatError(f"bad transition {raw!r}", number)
        src, quoted, bare, dst = found.groups()
        source, target = int(src), int(dst)
        if source >= num_states or target >= num_states:
            raise AutFormatError("state index out of range", number)
        label = parse_label(quoted if quoted is not None else bare, number)
        transitions.append((source, label, target))

    if len(transitions) != num_transitions:
        raise AutFormatError(
            f"header announces {num_transitions} transition(s), found {len(transitions)}"
        )

    states = [CanonicalState(f"aut:{i}".encode("ascii"), i) for i in range(num_states)]
    return Lts(states=states, transitions=transitions, initial=initial)
