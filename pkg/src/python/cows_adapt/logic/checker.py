"""
Global fixpoint model checking over an explored Lts.

Paths are maximal: a path may end in a deadlock state, and such finite paths
count for the path quantifiers (``AF``, ``AG``, ``EG``, ``AU``).
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from ..errors import UnsupportedPredicateError
from ..explorer.aut import import_aut
from ..explorer.lts import Lts
from ..semantics.transitions import Label, is_enabled
from ..syntax.terms import model_names
from .formulas import (
    AF,
    AG,
    AU,
    EF,
    EG,
    EU,
    And,
    Box,
    Diamond,
    Enabled,
    Formula,
    Implies,
    Not,
    Or,
    Top,
    format_formula,
    subformulas,
)

logger = logging.getLogger(__name__)

StateSet = FrozenSet[int]
Step = Tuple[int, Label]
Evidence = Tuple[List[Step], int, Optional[str]]
LabelTest = Callable[[Label], bool]


def _any_label(label: Label) -> bool:
    return True


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"


@dataclass
class CheckResult:
    """
    Outcome of checking one formula.

    ``evidence`` is a path from the initial state: each step is a state and
    the label taken from it; ``end_state`` is where the path stops. For a
    formula that holds it is a witness, for one that fails a counterexample.
    """

    verdict: Verdict
    evidence: List[Step] = field(default_factory=list)
    end_state: Optional[int] = None
    explanation: Optional[str] = None
    satisfying: Optional[StateSet] = None
    sound: bool = True
    stats: Dict[str, int] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def path(self) -> List[Tuple[int, Label, int]]:
        """Evidence as (source, label, target) triples."""
        triples = []
        for position, (state, label) in enumerate(self.evidence):
            if position + 1 < len(self.evidence):
                target = self.evidence[position + 1][0]
            else:
                target = self.end_state
            triples.append((state, label, target))
        return triples

    def trace_lines(self) -> List[str]:
        lines = [f"{src} --{label}--> {dst}" for src, label, dst in self.path()]
        if self.explanation:
            lines.append(f"({self.explanation})")
        return lines


class _Checker:
    def __init__(self, lts: Lts) -> None:
        self.lts = lts
        self.states: StateSet = frozenset(s.index for s in lts.states)
        self.succ = lts.successors()
        self.dead: StateSet = frozenset(s for s in self.states if not self.succ[s])
        self.cache: Dict[Formula, StateSet] = {}
        self.iterations: Dict[str, int] = {}

    # --- predecessor operators --------------------------------------------

    def pre_exists(self, target: StateSet, accept: LabelTest = _any_label) -> StateSet:
        return frozenset(
            s for s in self.states if any(accept(l) and t in target for l, t in self.succ[s])
        )

    def pre_all(self, target: StateSet, accept: LabelTest = _any_label) -> StateSet:
        return frozenset(
            s for s in self.states if all(t in target for l, t in self.succ[s] if accept(l))
        )

    def _fixpoint(
        self, name: str, start: StateSet, step: Callable[[StateSet], StateSet]
    ) -> StateSet:
        current = start
        rounds = 0
        while True:
            following = step(current)
            if following == current:
                break
            current = following
            rounds += 1
        self.iterations[name] = max(self.iterations.get(name, 0), rounds)
        return current

    # --- satisfaction sets -------------------------------------------------

    def sat(self, formula: Formula) -> StateSet:
        cached = self.cache.get(formula)
        if cached is None:
            cached = self._compute(formula)
            self.cache[formula] = cached
        return cached

    def _compute(self, f: Formula) -> StateSet:
        if isinstance(f, Top):
            return self.states
        if isinstance(f, Not):
            return self.states - self.sat(f.sub)
        if isinstance(f, And):
            return self.sat(f.left) & self.sat(f.right)
        if isinstance(f, Or):
            return self.sat(f.left) | self.sat(f.right)
        if isinstance(f, Implies):
            return (self.states - self.sat(f.left)) | self.sat(f.right)
        if isinstance(f, Diamond):
            return self.pre_exists(self.sat(f.sub), f.pattern.matches)
        if isinstance(f, Box):
            return self.pre_all(self.sat(f.sub), f.pattern.matches)
        if isinstance(f, Enabled):
            return self._enabled(f)

        live = self.states - self.dead
        if isinstance(f, EF):
            phi = self.sat(f.sub)
            return self._fixpoint("EF", frozenset(), lambda z: phi | self.pre_exists(z))
        if isinstance(f, AF):
            phi = self.sat(f.sub)
            return self._fixpoint("AF", frozenset(), lambda z: phi | (live & self.pre_all(z)))
        if isinstance(f, EG):
            phi = self.sat(f.sub)
            return self._fixpoint(
                "EG", self.states, lambda z: phi & (self.dead | self.pre_exists(z))
            )
        if isinstance(f, AG):
            phi = self.sat(f.sub)
            return self._fixpoint("AG", self.states, lambda z: phi & self.pre_all(z))
        if isinstance(f, EU):
            phi, psi = self.sat(f.left), self.sat(f.right)
            return self._fixpoint("EU", frozenset(), lambda z: psi | (phi & self.pre_exists(z)))
        if isinstance(f, AU):
            phi, psi = self.sat(f.left), self.sat(f.right)
            return self._fixpoint(
                "AU", frozenset(), lambda z: psi | (phi & live & self.pre_all(z))
            )
        raise TypeError(f"not a formula: {f!r}")

    def _enabled(self, f: Enabled) -> StateSet:
        if any(s.config is None for s in self.lts.states):
            raise UnsupportedPredicateError(
                f"enabled({f.partner}.{f.operation}) needs process terms; "
                "it cannot be checked on an imported LTS"
            )
        return frozenset(
            s.index for s in self.lts.states if is_enabled(s.config, f.partner, f.operation)
        )

    # --- evidence ----------------------------------------------------------

    def shortest_path(
        self, start: int, goal: StateSet, through: Optional[StateSet] = None
    ) -> Optional[Tuple[List[Step], int]]:
        """Breadth-first path from ``start`` to a goal state, staying inside ``through``."""
        parents: Dict[int, Optional[Tuple[int, Label]]] = {start: None}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            if state in goal:
                end = state
                steps: List[Step] = []
                while parents[state] is not None:
                    previous, label = parents[state]
                    steps.append((previous, label))
                    state = previous
                steps.reverse()
                return steps, end
            if through is not None and state not in through:
                continue
            for label, target in self.succ[state]:
                if target not in parents:
                    parents[target] = (state, label)
                    queue.append(target)
        return None

    def maximal_path(self, start: int, inside: StateSet) -> Evidence:
        """Follow successors inside ``inside`` until a deadlock or a repeated state."""
        steps: List[Step] = []
        visited = {start}
        state = start
        while True:
            if not self.succ[state]:
                return steps, state, f"state {state} is a deadlock"
            options = [(l, t) for l, t in self.succ[state] if t in inside]
            if not options:
                return steps, state, None
            label, target = options[0]
            steps.append((state, label))
            if target in visited:
                return steps, target, f"loops back to state {target}"
            visited.add(target)
            state = target

    def explain(self, f: Formula, state: int, holds: bool) -> Evidence:
        """Witness (``holds``) or counterexample for ``f`` at ``state``."""
        if isinstance(f, Not):
            return self.explain(f.sub, state, not holds)

        if isinstance(f, And):
            if holds:
                return self.explain(f.left, state, True)
            side = f.left if state not in self.sat(f.left) else f.right
            return self.explain(side, state, False)

        if isinstance(f, Or):
            if not holds:
                return self.explain(f.left, state, False)
            side = f.left if state in self.sat(f.left) else f.right
            return self.explain(side, state, True)

        if isinstance(f, Implies):
            if not holds:
                return self.explain(f.right, state, False)
            if state not in self.sat(f.left):
                return self.explain(f.left, state, False)
            return self.explain(f.right, state, True)

        if isinstance(f, Diamond):
            if not holds:
                return [], state, f"no {f.pattern} step from state {state} satisfies the formula"
            for label, target in self.succ[state]:
                if f.pattern.matches(label) and target in self.sat(f.sub):
                    return [(state, label)], target, None

        if isinstance(f, Box) and not holds:
            for label, target in self.succ[state]:
                if f.pattern.matches(label) and target not in self.sat(f.sub):
                    steps, end, why = self.explain(f.sub, target, False)
                    return [(state, label)] + steps, end, why

        if isinstance(f, AG) and not holds:
            found = self.shortest_path(state, self.states - self.sat(f.sub))
            prefix, bad = found if found else ([], state)
            steps, end, why = self.explain(f.sub, bad, False)
            return prefix + steps, end, why or f"state {bad} violates {format_formula(f.sub)}"

        if isinstance(f, (EF, EU)):
            if not holds:
                return self.maximal_path(state, self.states)
            goal = self.sat(f.sub if isinstance(f, EF) else f.right)
            through = self.sat(f.left) if isinstance(f, EU) else None
            found = self.shortest_path(state, goal, through)
            if found:
                return found[0], found[1], None

        if isinstance(f, (AF, AU)) and not holds:
            return self.maximal_path(state, self.states - self.sat(f))

        if isinstance(f, EG) and holds:
            return self.maximal_path(state, self.sat(f))

        return [], state, None


def _warn_unknown_names(lts: Lts, formula: Formula) -> None:
    if lts.model is not None:
        known = model_names(lts.model)
    else:
        known = set()
        for partner, operation in lts.comm_endpoints():
            known.update((partner, operation))
    for sub in subformulas(formula):
        names = []
        if isinstance(sub, (Diamond, Box)):
            names = [n for n in (sub.pattern.partner, sub.pattern.operation) if n is not None]
        elif isinstance(sub, Enabled):
            names = [sub.partner, sub.operation]
        for name in names:
            if name not in known:
                logger.warning(
                    "%s mentions %r, which does not occur in the model (typo?)",
                    format_formula(sub),
                    name,
                )


def check(lts: Lts, formula: Formula) -> CheckResult:
    """
    Check a formula on the initial state of an Lts.

    Args:
        lts: Explored (or imported) transition system
        formula: Formula to check

    Returns:
        CheckResult with verdict, evidence and the satisfying state set

    Raises:
        UnsupportedPredicateError: ``enabled(...)`` on an Lts without terms
    """
    _warn_unknown_names(lts, formula)
    checker = _Checker(lts)
    satisfying = checker.sat(formula)
    holds = lts.initial in satisfying
    steps, end, why = checker.explain(formula, lts.initial, holds)
    stats = {"states": len(checker.states)}
    stats.update((f"{name}_iterations", count) for name, count in checker.iterations.items())

    result = CheckResult(
        verdict=Verdict.HOLDS if holds else Verdict.FAILS,
        evidence=steps,
        end_state=end,
        explanation=why,
        satisfying=satisfying,
        sound=lts.is_sound(),
        stats=stats,
    )
    if not result.sound:
        logger.warning(
            "verdict for %s may be unsound: the state space was truncated (%s bound)",
            format_formula(formula),
            lts.truncated.value,
        )
    return result


def check_from_aut(aut_text: str, formula: Formula) -> CheckResult:
    """Check a formula on an LTS given as Aldebaran text."""
    return check(import_aut(aut_text), formula)
