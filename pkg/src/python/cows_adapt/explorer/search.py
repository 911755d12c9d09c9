"""
Breadth-first construction of the reachable state space.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Set

from ..config import CowsConfig
from ..semantics.transitions import Config, StepResult, enabled_transitions
from ..syntax.terms import Model
from .lts import CanonicalState, Lts, Transition, Truncation

logger = logging.getLogger(__name__)


def explore(
    model: Model,
    max_states: Optional[int] = None,
    max_depth: Optional[int] = None,
    keep_tau: bool = False,
    workers: int = 1,
) -> Lts:
    """
    Explore the transition system reachable from a model's main term.

    States are numbered in breadth-first, first-seen order. With more than one
    worker each BFS layer is expanded concurrently and the results are merged
    in frontier order, so the outcome does not depend on the worker count.

    Args:
        model: Model to explore
        max_states: State bound (defaults to ``CowsConfig.Explorer.max_states()``)
        max_depth: Depth bound; None for unbounded
        keep_tau: Keep definition unfolding as ``tau`` transitions
        workers: Number of threads expanding a layer

    Returns:
        The explored Lts; ``truncated`` tells whether a bound was hit
    """
    if max_states is None:
        max_states = CowsConfig.Explorer.max_states()
    if max_states < 1:
        raise ValueError("max_states must be positive")
    if max_depth is not None and max_depth < 1:
        raise ValueError("max_depth must be positive")

    initial = Config.initial(model, keep_tau)
    states: List[CanonicalState] = [CanonicalState(initial.key, 0, initial)]
    index: Dict[bytes, int] = {initial.key: 0}
    transitions: List[Transition] = []
    seen: Set[Transition] = set()
    diagnostics: Dict[str, None] = {}
    truncated = Truncation.NONE

    def step(config: Config) -> StepResult:
        return enabled_transitions(config, keep_tau)

    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        frontier = [0]
        depth = 0
        while frontier and truncated is Truncation.NONE:
            configs = [states[i].config for i in frontier]
            results = list(executor.map(step, configs) if executor else map(step, configs))

            for result in results:
                for diagnostic in result.diagnostics:
                    diagnostics.setdefault(str(diagnostic), None)

            if max_depth is not None and depth >= max_depth:
                if any(r.transitions for r in results):
                    truncated = Truncation.DEPTH
                break

            next_frontier: List[int] = []
            for src, result in zip(frontier, results):
                for label, successor in result.transitions:
                    dst = index.get(successor.key)
                    if dst is None:
                        if len(states) >= max_states:
                            truncated = Truncation.STATES
                            break
                        dst = len(states)
                        index[successor.key] = dst
                        states.append(CanonicalState(successor.key, dst, successor))
                        next_frontier.append(dst)
                    transition = (src, label, dst)
                    if transition not in seen:
                        seen.add(transition)
                        transitions.append(transition)
                if truncated is not Truncation.NONE:
                    break

            logger.debug(
                "Layer %d: %d state(s), %d transition(s) so far",
                depth,
                len(states),
                len(transitions),
            )
            frontier = next_frontier
            depth += 1
    finally:
        if executor is not None:
            executor.shutdown()

    for diagnostic in diagnostics:
        logger.warning(diagnostic)
    if truncated is Truncation.STATES:
        logger.warning("exploration truncated at %d states", max_states)
    elif truncated is Truncation.DEPTH:
        logger.warning("exploration truncated at depth %d", max_depth)

    logger.info("Explored %d state(s), %d transition(s)", len(states), len(transitions))
    return Lts(
        states=states,
        transitions=transitions,
        truncated=truncated,
        diagnostics=list(diagnostics),
        model=model,
    )
