import logging
from collections import deque
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Deque, Dict, Iterable, Iterator, List, Tuple

from config.environment import config
from src.contractor.prune import BoxStatus
from src.interval.box import Box

logger = logging.getLogger(__name__)


class SolveTimeoutError(RuntimeError):
    """Raised when a solve exceeds its time budget"""


@dataclass
class SolverConfig:
    """Per-run precision and propagation settings"""
    epsilon: float = config.EPSILON
    rtol: float = config.PROPAGATION_RTOL
    max_rounds: int = config.PROPAGATION_MAX_ROUNDS

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"Precision must be positive (got {self.epsilon})")
        if not self.rtol >= 0:
            raise ValueError(f"Propagation tolerance must be nonnegative (got {self.rtol})")
        if self.max_rounds < 1:
            raise ValueError(f"Propagation needs at least one round (got {self.max_rounds})")


@dataclass
class RunStats:
    """Counters for one worker (or one sequential run)"""
    branches: int = 0
    prunes: int = 0
    inner: int = 0
    precise: int = 0
    empty: int = 0
    wall_time: float = 0.0
    sent_boxes: int = 0
    recv_boxes: int = 0
    sent_batches: int = 0
    recv_batches: int = 0
    load_msgs: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunStats":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def combine(cls, parts: Iterable["RunStats"]) -> "RunStats":
        """Counters summed; wall_time is the longest part"""
        total = cls()
        for part in parts:
            for f in fields(cls):
                if f.name == "wall_time":
                    total.wall_time = max(total.wall_time, part.wall_time)
                else:
                    setattr(total, f.name, getattr(total, f.name) + getattr(part, f.name))
        return total


@dataclass(frozen=True)
class PavingEntry:
    box: Box
    status: BoxStatus

    def key(self) -> Tuple[str, Tuple[Tuple[float, float], ...]]:
        """Endpoint-exact identity, ignoring depth"""
        return self.status.value, tuple((c.lo, c.hi) for c in self.box.components)


@dataclass
class Paving:
    """Inner and precise boxes found so far"""
    entries: List[PavingEntry] = field(default_factory=list)

    def add(self, box: Box, status: BoxStatus):
        if status not in (BoxStatus.INNER, BoxStatus.PRECISE):
            raise ValueError(f"Only inner or precise boxes belong to a paving (got {status.value})")
        self.entries.append(PavingEntry(box, status))

    def extend(self, other: "Paving"):
        self.entries.extend(other.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[PavingEntry]:
        return iter(self.entries)

    def boxes(self) -> List[Box]:
        return [entry.box for entry in self.entries]

    def count(self, status: BoxStatus) -> int:
        return sum(1 for entry in self.entries if entry.status is status)

    def multiset(self) -> List[Tuple[str, Tuple[Tuple[float, float], ...]]]:
        """Sorted entry keys; equal for pavings holding the same boxes in any order"""
        return sorted(entry.key() for entry in self.entries)

    def contains_point(self, point) -> bool:
        return any(entry.box.contains_point(point) for entry in self.entries)

    @classmethod
    def merge(cls, parts: Iterable["Paving"]) -> "Paving":
        merged = cls()
        for part in parts:
            merged.extend(part)
        return merged


@dataclass
class SolverState:
    """Work queue L and paving S of one branch-and-prune engine"""
    queue: Deque[Box] = field(default_factory=deque)
    paving: Paving = field(default_factory=Paving)
    stats: RunStats = field(default_factory=RunStats)

    @classmethod
    def initial(cls, root: Box) -> "SolverState":
        return cls(queue=deque([root]))

    @property
    def load(self) -> int:
        return len(self.queue)

    @property
    def is_idle(self) -> bool:
        return not self.queue

    def push(self, box: Box):
        self.queue.append(box)

    def push_many(self, boxes: Iterable[Box]):
        self.queue.extend(boxes)

    def pop_front(self) -> Box:
        return self.queue.popleft()

    def take_back(self, count: int) -> List[Box]:
        """Remove up to count boxes from the back, returned in queue order"""
        taken = []
        for _ in range(min(count, len(self.queue))):
            taken.append(self.queue.pop())
        taken.reverse()
        return taken

    def split_by_volume(self) -> List[Box]:
        """Sort L by volume (largest first, stable), keep even positions, return odd positions"""
        ordered = sorted(self.queue, key=lambda box: box.volume(), reverse=True)
        self.queue = deque(ordered[0::2])
        return ordered[1::2]
