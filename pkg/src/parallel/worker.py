"""
Worker state machine for the parallel solver.

A WorkerRuntime owns one branch-and-prune engine and reacts to three calls:
start(), deliver(message) and work(). Each returns the envelopes to send as
(destination, message) pairs, so the same object runs under the
multiprocessing runtime and under the deterministic scheduler.

Termination uses a token ring with message counting. Every worker keeps
counter = BoxBatches sent - BoxBatches received and turns black when it sends
or receives a BoxBatch. Worker 0 launches a white token once it is idle; an
idle worker holding the token adds its counter, blackens the token if it is
black itself, turns white and passes it on. Worker 0 concludes when the token
comes back white with a zero total while it is white and idle.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from config.environment import config
from src.model.problem import NCSP
from src.parallel.messages import (
    BoxBatch, Color, LoadReport, Message, Outbox, ProtocolError, Terminate, Token,
)
from src.parallel.topology import Split, inverse_neighbors, neighbors, preprocess_plan, splits_by_worker
from src.search.engine import step
from src.search.state import Paving, RunStats, SolverConfig, SolverState

logger = logging.getLogger(__name__)


@dataclass
class ParallelConfig:
    """Worker count and load balancing parameters"""
    worker_count: int = config.WORKERS
    nbb: int = config.NBB
    ns: int = config.NS
    delta: int = config.DELTA
    neighborhood_size: int = config.NEIGHBORS
    preprocess: bool = config.PREPROCESS

    def __post_init__(self):
        problems = []
        if self.worker_count < 1:
            problems.append(f"worker count must be at least 1 (got {self.worker_count})")
        if self.worker_count > 0xFFFF:
            problems.append(f"worker count must fit in 16 bits (got {self.worker_count})")
        if self.nbb < 2:
            problems.append(f"N_BB must be at least 2 (got {self.nbb})")
        if self.ns < 1:
            problems.append(f"N_S must be at least 1 (got {self.ns})")
        if self.delta < 0:
            problems.append(f"delta must be nonnegative (got {self.delta})")
        if self.neighborhood_size not in (2, 4):
            problems.append(f"neighbourhood size must be 2 or 4 (got {self.neighborhood_size})")
        if problems:
            raise ValueError(f"Invalid parallel configuration: {'; '.join(problems)}")


@dataclass
class BalancerState:
    neighbors: Tuple[int, ...]
    inverse: Tuple[int, ...]
    # latest known load per neighbour; may be stale
    loads: Dict[int, int] = field(default_factory=dict)
    steps_since_balance: int = 0

    def mean_load(self) -> Optional[float]:
        known = [self.loads[j] for j in self.neighbors if j in self.loads]
        if not known:
            return None
        return sum(known) / len(known)


def plan_transfers(own_load: int, loads: Dict[int, int], neighbor_ids: Tuple[int, ...],
                   delta: int) -> Dict[int, int]:
    """Boxes to ship per neighbour in one balancing round

    The mean of the known neighbour loads sets a target of ceil(mean) boxes
    (1 when every known neighbour is starving). Neighbours below the target
    get the difference while this worker keeps at least delta boxes.
    """
    known = [loads[j] for j in neighbor_ids if j in loads]
    if not known:
        return {}
    mean = sum(known) / len(known)
    if mean >= delta:
        return {}
    target = math.ceil(mean) if mean > 0 else 1
    surplus = max(0, own_load - delta)
    transfers: Dict[int, int] = {}
    for j in neighbor_ids:
        if surplus == 0:
            break
        if j not in loads or loads[j] >= target:
            continue
        count = min(target - loads[j], surplus)
        transfers[j] = count
        surplus -= count
    return transfers


class WorkerRuntime:
    """One worker of the parallel solver"""

    def __init__(self, worker_id: int, problem: NCSP, settings: SolverConfig, parallel: ParallelConfig):
        if not 0 <= worker_id < parallel.worker_count:
            raise ValueError(f"Worker id {worker_id} outside 0..{parallel.worker_count - 1}")
        self.id = worker_id
        self.problem = problem
        self.settings = settings
        self.parallel = parallel
        self.state = SolverState()

        p = parallel.worker_count
        if p > 1:
            self.balancer = BalancerState(
                neighbors(worker_id, p, parallel.neighborhood_size),
                inverse_neighbors(worker_id, p, parallel.neighborhood_size),
            )
        else:
            self.balancer = BalancerState((), ())

        plan: List[Split] = preprocess_plan(p) if (parallel.preprocess and p > 1) else []
        self.pending_splits: List[Split] = splits_by_worker(plan).get(worker_id, [])
        sources = [split.splitter for split in plan if split.receiver == worker_id]
        self.initial_source: Optional[int] = sources[0] if sources else None
        self.awaiting_initial = self.initial_source is not None

        self.color = Color.WHITE
        self.counter = 0
        self.token: Optional[Token] = None
        self.token_out = False
        self.announced_idle = False
        self.terminated = False

    # Queries

    @property
    def load(self) -> int:
        return self.state.load

    @property
    def in_preprocess(self) -> bool:
        return self.awaiting_initial or bool(self.pending_splits)

    @property
    def is_passive(self) -> bool:
        """Nothing to compute until a BoxBatch arrives"""
        return self.state.is_idle and not self.in_preprocess

    def wants_to_work(self) -> bool:
        if self.terminated:
            return False
        if self.awaiting_initial:
            return False
        if not self.is_passive:
            return True
        if self.parallel.worker_count == 1:
            return True
        if not self.announced_idle and self.balancer.inverse:
            return True
        if self.token is not None:
            return True
        return self.id == 0 and not self.token_out

    @property
    def paving(self) -> Paving:
        return self.state.paving

    @property
    def stats(self) -> RunStats:
        return self.state.stats

    # Calls from the runtime

    def start(self) -> Outbox:
        if self.id == 0:
            self.state.push(self.problem.initial)
        logger.debug(
            f"Worker {self.id} started: neighbours {self.balancer.neighbors}, "
            f"{len(self.pending_splits)} preprocess splits"
        )
        return []

    def deliver(self, message: Message) -> Outbox:
        if self.terminated:
            return []
        if isinstance(message, BoxBatch):
            self._receive_batch(message)
        elif isinstance(message, LoadReport):
            if message.sender not in self.balancer.neighbors:
                raise ProtocolError(f"Worker {self.id} got a load report from non-neighbour {message.sender}")
            self.balancer.loads[message.sender] = message.load
        elif isinstance(message, Token):
            if self.token is not None:
                raise ProtocolError(f"Worker {self.id} received a second termination token")
            self.token = message
            if self.id == 0:
                self.token_out = False
        elif isinstance(message, Terminate):
            if not self.is_passive:
                raise ProtocolError(f"Worker {self.id} told to terminate with {self.load} boxes queued")
            self.terminated = True
            logger.debug(f"Worker {self.id} terminating")
        else:
            raise ProtocolError(f"Worker {self.id} received unknown message {message!r}")
        return []

    def work(self) -> Outbox:
        """One unit of work: a preprocess step or split, a search step, or idle bookkeeping"""
        if self.terminated or self.awaiting_initial:
            return []
        if self.pending_splits:
            return self._preprocess_unit()
        if not self.state.is_idle:
            return self._search_unit()
        return self._idle_unit()

    # Box traffic

    def _receive_batch(self, batch: BoxBatch):
        if batch.initial:
            if batch.sender != self.initial_source or not self.awaiting_initial:
                raise ProtocolError(f"Worker {self.id} got an unexpected initial batch from {batch.sender}")
            self.awaiting_initial = False
        elif batch.sender not in self.balancer.inverse:
            raise ProtocolError(f"Worker {self.id} got boxes from non-neighbour {batch.sender}")
        self.state.push_many(batch.boxes)
        self.counter -= 1
        self.color = Color.BLACK
        self.state.stats.recv_batches += 1
        self.state.stats.recv_boxes += len(batch.boxes)
        if batch.boxes:
            self.announced_idle = False

    def _ship(self, destination: int, boxes, initial: bool = False) -> Tuple[int, Message]:
        self.counter += 1
        self.color = Color.BLACK
        self.state.stats.sent_batches += 1
        self.state.stats.sent_boxes += len(boxes)
        return destination, BoxBatch(self.id, tuple(boxes), initial=initial)

    # Units of work

    def _preprocess_unit(self) -> Outbox:
        if self.state.load < self.parallel.nbb and not self.state.is_idle:
            step(self.problem, self.state, self.settings)
            return []
        split = self.pending_splits.pop(0)
        batch = self.state.split_by_volume()
        logger.debug(
            f"Worker {self.id} preprocess stage {split.stage}: sending {len(batch)} boxes "
            f"to worker {split.receiver}, keeping {self.state.load}"
        )
        return [self._ship(split.receiver, batch, initial=True)]

    def _search_unit(self) -> Outbox:
        step(self.problem, self.state, self.settings)
        outbox: Outbox = []
        if self.parallel.worker_count > 1:
            self.balancer.steps_since_balance += 1
            if self.balancer.steps_since_balance >= self.parallel.ns:
                outbox.extend(self.balance_round())
        return outbox

    def balance_round(self) -> Outbox:
        """Report the local load, then ship boxes to neighbours below the neighbourhood mean"""
        self.balancer.steps_since_balance = 0
        own_load = self.state.load
        outbox: Outbox = [(j, LoadReport(self.id, own_load)) for j in self.balancer.inverse]
        self.state.stats.load_msgs += len(outbox)

        transfers = plan_transfers(own_load, self.balancer.loads, self.balancer.neighbors, self.parallel.delta)
        for j, count in transfers.items():
            boxes = self.state.take_back(count)
            if not boxes:
                break
            outbox.append(self._ship(j, boxes))
            self.balancer.loads[j] += len(boxes)
        if transfers:
            logger.debug(f"Worker {self.id} balanced {transfers} from load {own_load}")
        return outbox

    def _idle_unit(self) -> Outbox:
        p = self.parallel.worker_count
        if p == 1:
            self.terminated = True
            return []

        outbox: Outbox = []
        if not self.announced_idle:
            outbox.extend((j, LoadReport(self.id, 0)) for j in self.balancer.inverse)
            self.state.stats.load_msgs += len(self.balancer.inverse)
            self.announced_idle = True

        if self.id == 0:
            if self.token is not None:
                token, self.token = self.token, None
                if (token.color is Color.WHITE and self.color is Color.WHITE
                        and token.count + self.counter == 0):
                    self.terminated = True
                    logger.debug("Worker 0 detected termination")
                    outbox.extend((j, Terminate()) for j in range(1, p))
                    return outbox
            if not self.token_out:
                self.color = Color.WHITE
                self.token_out = True
                outbox.append((1, Token(Color.WHITE, 0)))
            return outbox

        if self.token is not None:
            token, self.token = self.token, None
            color = Color.BLACK if (self.color is Color.BLACK or token.color is Color.BLACK) else Color.WHITE
            outbox.append(((self.id + 1) % p, Token(color, token.count + self.counter)))
            self.color = Color.WHITE
        return outbox
