import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.contractor.hc4 import DEFAULT_MAX_ROUNDS, DEFAULT_RTOL, propagate
from src.contractor.newton import verify_inner
from src.interval.box import Box
from src.model.problem import NCSP

logger = logging.getLogger(__name__)


class BoxStatus(Enum):
    """Classification of a box after pruning"""
    EMPTY = "empty"
    INNER = "inner"
    PRECISE = "precise"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class PruneResult:
    status: BoxStatus
    box: Optional[Box] = None

    @property
    def is_final(self) -> bool:
        return self.status is not BoxStatus.UNDECIDED


def prune(problem: NCSP, box: Box, epsilon: float, rtol: float = DEFAULT_RTOL,
          max_rounds: int = DEFAULT_MAX_ROUNDS) -> PruneResult:
    """Contract box and classify the result

    Order: contraction, then emptiness, then the inner test, then the
    precision test against epsilon.
    """
    contracted = propagate(problem, box, rtol=rtol, max_rounds=max_rounds)
    if contracted is None or contracted.is_empty:
        return PruneResult(BoxStatus.EMPTY)
    if verify_inner(problem, contracted):
        return PruneResult(BoxStatus.INNER, contracted)
    if contracted.width() < epsilon:
        return PruneResult(BoxStatus.PRECISE, contracted)
    return PruneResult(BoxStatus.UNDECIDED, contracted)
