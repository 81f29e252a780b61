"""
Worker neighbourhoods and the preprocess distribution tree.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple


@dataclass(frozen=True)
class Split:
    """One preprocess transfer: splitter ships half of its queue to receiver at stage"""
    splitter: int
    receiver: int
    stage: int


def torus_shape(worker_count: int) -> Tuple[int, int]:
    """(rows, cols) with rows the largest divisor of worker_count not above its square root"""
    rows = 1
    for candidate in range(1, math.isqrt(worker_count) + 1):
        if worker_count % candidate == 0:
            rows = candidate
    return rows, worker_count // rows


def neighbors(worker: int, worker_count: int, neighborhood_size: int) -> Tuple[int, ...]:
    """Sorted neighbour ids: a ring for size 2, a near-square torus for size 4"""
    if not 0 <= worker < worker_count:
        raise ValueError(f"Worker {worker} outside 0..{worker_count - 1}")
    if neighborhood_size not in (2, 4):
        raise ValueError(f"Neighbourhood size must be 2 or 4 (got {neighborhood_size})")

    if neighborhood_size == 2:
        found = {(worker - 1) % worker_count, (worker + 1) % worker_count}
    else:
        rows, cols = torus_shape(worker_count)
        r, c = divmod(worker, cols)
        found = {
            ((r - 1) % rows) * cols + c,
            ((r + 1) % rows) * cols + c,
            r * cols + (c - 1) % cols,
            r * cols + (c + 1) % cols,
        }
    found.discard(worker)
    return tuple(sorted(found))


def inverse_neighbors(worker: int, worker_count: int, neighborhood_size: int) -> Tuple[int, ...]:
    """Workers that list worker among their neighbours"""
    return tuple(
        j for j in range(worker_count)
        if j != worker and worker in neighbors(j, worker_count, neighborhood_size)
    )


def preprocess_plan(worker_count: int) -> List[Split]:
    """Binary-tree distribution of the root queue by ceiling halving of worker ranges

    The owner of range [a, b) ships to a + ceil((b - a) / 2) and both halves
    recurse one stage later, so the tree has height ceil(log2(worker_count)).
    """
    if worker_count < 1:
        raise ValueError(f"Worker count must be positive (got {worker_count})")
    plan: List[Split] = []
    pending = [(0, worker_count, 0)]
    while pending:
        a, b, stage = pending.pop(0)
        if b - a <= 1:
            continue
        receiver = a + (b - a + 1) // 2
        plan.append(Split(a, receiver, stage))
        pending.append((a, receiver, stage + 1))
        pending.append((receiver, b, stage + 1))
    plan.sort(key=lambda split: (split.stage, split.splitter))
    return plan


def splits_by_worker(plan: List[Split]) -> Dict[int, List[Split]]:
    """Each splitter's transfers in stage order"""
    grouped: Dict[int, List[Split]] = {}
    for split in plan:
        grouped.setdefault(split.splitter, []).append(split)
    for splits in grouped.values():
        splits.sort(key=lambda split: split.stage)
    return grouped


def tree_height(worker_count: int) -> int:
    return max((split.stage + 1 for split in preprocess_plan(worker_count)), default=0)
