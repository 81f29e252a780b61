"""
Single-threaded scheduler that interleaves workers under a seeded random (or
scripted) choice of actions. Messages travel through per-edge FIFO channels
in wire format. Used for protocol tests and for replayable runs with a trace.
"""
import json
import logging
import random
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Deque, Dict, List, Optional, Sequence, Tuple, Union

from src.model.problem import NCSP
from src.parallel import wire
from src.parallel.messages import Outbox, describe
from src.parallel.worker import ParallelConfig, WorkerRuntime
from src.search.state import Paving, RunStats, SolverConfig, SolveTimeoutError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ACTIONS = 5_000_000


class TerminationViolation(RuntimeError):
    """Raised when termination is declared too early or never happens"""


@dataclass(frozen=True)
class Action:
    kind: str  # "deliver" or "work"
    source: int
    target: int


@dataclass
class ParallelResult:
    paving: Paving
    worker_stats: List[RunStats]
    wall_time: float = 0.0
    actions: int = 0

    @property
    def total(self) -> RunStats:
        combined = RunStats.combine(self.worker_stats)
        combined.wall_time = self.wall_time
        return combined


# picks the index of the next action
Chooser = Callable[[Sequence[Action]], int]


@dataclass
class _Channels:
    edges: Dict[Tuple[int, int], Deque[bytes]] = field(default_factory=dict)

    def put(self, source: int, target: int, record: bytes):
        self.edges.setdefault((source, target), deque()).append(record)

    def ready(self) -> List[Tuple[int, int]]:
        return sorted(edge for edge, queue in self.edges.items() if queue)

    def pop(self, edge: Tuple[int, int]) -> bytes:
        return self.edges[edge].popleft()

    def boxes_in_flight(self) -> int:
        # byte 4 is the tag after the u32 length prefix
        return sum(
            1 for queue in self.edges.values() for record in queue
            if record[4] == wire.TAG_BOX_BATCH
        )


class DeterministicScheduler:
    """Run a parallel solve inside one process with a reproducible interleaving"""

    def __init__(self, problem: NCSP, settings: SolverConfig, parallel: ParallelConfig,
                 seed: int = 0, trace_path: Optional[Union[str, Path]] = None,
                 chooser: Optional[Chooser] = None, max_actions: int = DEFAULT_MAX_ACTIONS,
                 time_budget: Optional[float] = None):
        self.problem = problem
        self.parallel = parallel
        self.workers = [WorkerRuntime(i, problem, settings, parallel) for i in range(parallel.worker_count)]
        self.channels = _Channels()
        self.rng = random.Random(seed)
        self.chooser = chooser
        self.max_actions = max_actions
        self.time_budget = time_budget
        self.deadline: Optional[float] = None
        self.trace_path = Path(trace_path) if trace_path else None
        self.sequence = 0
        self._trace = None

    def actions(self) -> List[Action]:
        available = [Action("deliver", s, t) for s, t in self.channels.ready()]
        available.extend(Action("work", w.id, w.id) for w in self.workers if w.wants_to_work())
        return available

    def _route(self, source: int, outbox: Outbox):
        for target, message in outbox:
            self.channels.put(source, target, wire.encode(message))

    def _check_quiescent(self):
        busy = [w.id for w in self.workers if not w.is_passive]
        in_flight = self.channels.boxes_in_flight()
        if busy or in_flight:
            raise TerminationViolation(
                f"Termination declared with busy workers {busy} and {in_flight} box batches in flight"
            )

    def _record(self, action: Action, message):
        if self._trace is None:
            return
        entry = {"seq": self.sequence, "from": action.source, "to": action.target, "message": describe(message)}
        self._trace.write(json.dumps(entry) + "\n")

    def _choose(self, available: Sequence[Action]) -> Action:
        if self.chooser is not None:
            return available[self.chooser(available)]
        return self.rng.choice(available)

    def run(self) -> ParallelResult:
        started = time.perf_counter()
        self.deadline = started + self.time_budget if self.time_budget else None
        if self.trace_path is not None:
            self._trace = open(self.trace_path, "w")
        try:
            for worker in self.workers:
                self._route(worker.id, worker.start())
            self._loop()
        finally:
            if self._trace is not None:
                self._trace.close()
                self._trace = None
        wall_time = time.perf_counter() - started
        for worker in self.workers:
            worker.stats.wall_time = wall_time
        logger.info(f"Scheduler finished after {self.sequence} actions across {len(self.workers)} workers")
        return ParallelResult(
            paving=Paving.merge(w.paving for w in self.workers),
            worker_stats=[w.stats for w in self.workers],
            wall_time=wall_time,
            actions=self.sequence,
        )

    def _loop(self):
        root = self.workers[0]
        while not all(w.terminated for w in self.workers):
            if self.sequence >= self.max_actions:
                raise TerminationViolation(f"No termination after {self.max_actions} actions")
            if self.deadline is not None and time.perf_counter() > self.deadline:
                raise SolveTimeoutError(f"Scheduled solve exceeded its budget of {self.time_budget}s")
            available = self.actions()
            if not available:
                stuck = [w.id for w in self.workers if not w.terminated]
                raise TerminationViolation(f"Deadlock: workers {stuck} wait with no message in transit")
            action = self._choose(available)
            self.sequence += 1

            if action.kind == "deliver":
                message = wire.decode(self.channels.pop((action.source, action.target)))
                self._record(action, message)
                self._route(action.target, self.workers[action.target].deliver(message))
                continue

            was_terminated = root.terminated
            self._route(action.source, self.workers[action.source].work())
            if root.terminated and not was_terminated:
                self._check_quiescent()


def run_scheduled(problem: NCSP, settings: SolverConfig, parallel: ParallelConfig, seed: int = 0,
                  trace_path: Optional[Union[str, Path]] = None,
                  time_budget: Optional[float] = None) -> ParallelResult:
    return DeterministicScheduler(
        problem, settings, parallel, seed=seed, trace_path=trace_path, time_budget=time_budget
    ).run()
