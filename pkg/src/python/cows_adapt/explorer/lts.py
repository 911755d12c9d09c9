"""
Labelled transition systems produced by exploration.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

from ..semantics.transitions import Comm, Config, Label
from ..syntax.terms import Model

Transition = Tuple[int, Label, int]


class Truncation(str, Enum):
    NONE = "none"
    STATES = "states"
    DEPTH = "depth"


@dataclass(frozen=True)
class CanonicalState:
    """
    A state of an LTS.

    ``config`` is None for states read back from Aldebaran text.
    """

    key: bytes
    index: int
    config: Optional[Config] = field(default=None, compare=False, repr=False)


@dataclass
class Lts:
    states: List[CanonicalState] = field(default_factory=list)
    transitions: List[Transition] = field(default_factory=list)
    initial: int = 0
    truncated: Truncation = Truncation.NONE
    diagnostics: List[str] = field(default_factory=list)
    model: Optional[Model] = field(default=None, repr=False)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    def successors(self) -> List[List[Tuple[Label, int]]]:
        """Outgoing (label, target) pairs of every state, in transition order."""
        out: List[List[Tuple[Label, int]]] = [[] for _ in self.states]
        for src, label, dst in self.transitions:
            out[src].append((label, dst))
        return out

    def predecessors(self) -> List[List[Tuple[int, Label]]]:
        into: List[List[Tuple[int, Label]]] = [[] for _ in self.states]
        for src, label, dst in self.transitions:
            into[dst].append((src, label))
        return into

    def deadlocks(self) -> Set[int]:
        busy = {src for src, _, _ in self.transitions}
        return {s.index for s in self.states} - busy

    def comm_endpoints(self) -> Set[Tuple[str, str]]:
        return {
            (label.partner, label.operation)
            for _, label, _ in self.transitions
            if isinstance(label, Comm)
        }

    def label_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for _, label, _ in self.transitions:
            counts[str(label)] = counts.get(str(label), 0) + 1
        return counts

    def is_sound(self) -> bool:
        return self.truncated is Truncation.NONE
