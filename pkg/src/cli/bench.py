"""
Benchmark harness: a sequential baseline per problem, then the cross product
of worker counts, neighbourhood sizes, balancing intervals and preprocess
settings, written as CSV rows with speedup and balance ratio columns.
"""
import csv
import itertools
import logging
from dataclasses import asdict, dataclass, fields
from typing import Iterable, List, Optional, Sequence, TextIO

from src.cli.run_store import Baseline, RunStore, problem_key
from src.cli.solving import ProblemInput, execute
from src.parallel.worker import ParallelConfig
from src.search.engine import solve_sequential
from src.search.state import SolverConfig, SolveTimeoutError

logger = logging.getLogger(__name__)


@dataclass
class BenchRecord:
    problem: str
    epsilon: float
    preprocess: Optional[bool]
    neighbors: Optional[int]
    ns: Optional[int]
    workers: int
    wall_time: Optional[float]
    max_branches: Optional[int]
    load_sends: Optional[int]
    speedup: Optional[float]
    balance_ratio: Optional[float]
    status: str = "ok"
    baseline_cached: bool = False


@dataclass
class BenchGrid:
    worker_counts: Sequence[int] = (8,)
    neighborhood_sizes: Sequence[int] = (2, 4)
    ns_values: Sequence[int] = (10, 100, 1000)
    preprocess_values: Sequence[bool] = (True, False)
    nbb: int = 32
    delta: int = 10

    def configurations(self) -> List[ParallelConfig]:
        return [
            ParallelConfig(worker_count=p, nbb=self.nbb, ns=ns, delta=self.delta,
                           neighborhood_size=size, preprocess=pre)
            for p, size, ns, pre in itertools.product(
                self.worker_counts, self.neighborhood_sizes, self.ns_values, self.preprocess_values
            )
        ]


async def baseline_for(store: Optional[RunStore], entry: ProblemInput, settings: SolverConfig):
    """Stored sequential baseline, or a fresh sequential run saved to the store"""
    key = problem_key(entry.name, None if entry.name else entry.source)
    if store is not None:
        cached = await store.get_baseline(key, settings.epsilon)
        if cached is not None:
            logger.info(f"Reusing baseline for {entry.label} at eps={settings.epsilon}")
            return cached, True
    _, stats = solve_sequential(entry.problem, settings)
    baseline = Baseline(key, settings.epsilon, stats.wall_time, stats.branches)
    if store is not None:
        await store.save_baseline(baseline)
    return baseline, False


async def run_bench(entries: Iterable[ProblemInput], settings: SolverConfig, grid: BenchGrid,
                    store: Optional[RunStore] = None, time_budget: Optional[float] = None) -> List[BenchRecord]:
    records: List[BenchRecord] = []
    configurations = grid.configurations()
    for entry in entries:
        baseline, cached = await baseline_for(store, entry, settings)
        records.append(BenchRecord(
            problem=entry.label, epsilon=settings.epsilon, preprocess=None, neighbors=None, ns=None,
            workers=1, wall_time=baseline.wall_time, max_branches=baseline.branches, load_sends=0,
            speedup=1.0, balance_ratio=1.0, status="baseline", baseline_cached=cached,
        ))
        for parallel in configurations:
            records.append(_measure(entry, settings, parallel, baseline, cached, time_budget))
    return records


def _measure(entry: ProblemInput, settings: SolverConfig, parallel: ParallelConfig, baseline: Baseline,
             cached: bool, time_budget: Optional[float]) -> BenchRecord:
    common = dict(
        problem=entry.label, epsilon=settings.epsilon, preprocess=parallel.preprocess,
        neighbors=parallel.neighborhood_size, ns=parallel.ns, workers=parallel.worker_count,
        baseline_cached=cached,
    )
    try:
        result = execute(entry.problem, settings, parallel, time_budget=time_budget)
    except SolveTimeoutError:
        logger.warning(f"{entry.label} with {parallel} exceeded {time_budget}s")
        return BenchRecord(wall_time=None, max_branches=None, load_sends=None, speedup=None,
                           balance_ratio=None, status="timeout", **common)

    max_branches = max(s.branches for s in result.worker_stats)
    return BenchRecord(
        wall_time=result.wall_time,
        max_branches=max_branches,
        load_sends=sum(s.sent_boxes for s in result.worker_stats),
        speedup=baseline.wall_time / result.wall_time if result.wall_time > 0 else None,
        balance_ratio=baseline.branches / max_branches if max_branches > 0 else None,
        **common,
    )


def write_csv(records: Sequence[BenchRecord], stream: TextIO):
    writer = csv.DictWriter(stream, fieldnames=[f.name for f in fields(BenchRecord)])
    writer.writeheader()
    for record in records:
        writer.writerow({k: ("" if v is None else v) for k, v in asdict(record).items()})
