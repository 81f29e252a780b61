"""
Breadth-first branch and prune.

Each step pops the front of the queue, prunes it, files inner and precise
boxes into the paving and pushes the two halves of an undecided box to the
back. Splitting cycles through the variables by depth, so the queue is
processed level by level.
"""
import logging
import time
from typing import Optional, Tuple, Union

from src.contractor.prune import BoxStatus, PruneResult, prune
from src.interval.box import Box, DegenerateDimensionError
from src.model.problem import NCSP
from src.search.state import Paving, RunStats, SolveTimeoutError, SolverConfig, SolverState

logger = logging.getLogger(__name__)


def split_dimension(box: Box) -> Optional[int]:
    """depth mod n, advanced cyclically past components that cannot be bisected"""
    n = len(box)
    if n == 0:
        return None
    start = box.depth % n
    for offset in range(n):
        dim = (start + offset) % n
        if box.can_bisect(dim):
            return dim
    return None


def branch(box: Box) -> Tuple[Box, Box]:
    dim = split_dimension(box)
    if dim is None:
        raise DegenerateDimensionError(f"No component of {box!r} can be bisected")
    return box.bisect(dim)


def _as_config(settings: Union[SolverConfig, float]) -> SolverConfig:
    if isinstance(settings, SolverConfig):
        return settings
    return SolverConfig(epsilon=float(settings))


def step(problem: NCSP, state: SolverState, settings: Union[SolverConfig, float]) -> PruneResult:
    """One branch-and-prune step on the front of the queue"""
    settings = _as_config(settings)
    box = state.pop_front()
    result = prune(problem, box, settings.epsilon, rtol=settings.rtol, max_rounds=settings.max_rounds)
    state.stats.prunes += 1

    if result.status is BoxStatus.EMPTY:
        state.stats.empty += 1
        return result

    if result.status is BoxStatus.UNDECIDED:
        if split_dimension(result.box) is None:
            logger.warning(f"Undecided box cannot be bisected, keeping it as precise: {result.box!r}")
            result = PruneResult(BoxStatus.PRECISE, result.box)
        else:
            left, right = branch(result.box)
            state.stats.branches += 1
            state.push(left)
            state.push(right)
            return result

    if result.status is BoxStatus.INNER:
        state.stats.inner += 1
    else:
        state.stats.precise += 1
    state.paving.add(result.box, result.status)
    return result


def run_until_idle(problem: NCSP, state: SolverState, settings: Union[SolverConfig, float],
                   time_budget: Optional[float] = None) -> None:
    settings = _as_config(settings)
    deadline = time.perf_counter() + time_budget if time_budget else None
    while not state.is_idle:
        if deadline is not None and time.perf_counter() > deadline:
            raise SolveTimeoutError(f"Sequential solve exceeded its budget of {time_budget}s")
        step(problem, state, settings)


def solve_sequential(problem: NCSP, settings: Union[SolverConfig, float],
                     time_budget: Optional[float] = None) -> Tuple[Paving, RunStats]:
    """Run steps from the initial box until the queue is empty"""
    settings = _as_config(settings)
    state = SolverState.initial(problem.initial)
    started = time.perf_counter()
    run_until_idle(problem, state, settings, time_budget)
    state.stats.wall_time = time.perf_counter() - started
    logger.info(
        f"Sequential solve of {problem.title or 'problem'} at eps={settings.epsilon}: "
        f"{len(state.paving)} boxes, {state.stats.branches} branches in {state.stats.wall_time:.3f}s"
    )
    return state.paving, state.stats
