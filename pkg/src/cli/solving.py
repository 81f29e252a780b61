"""
Problem resolution and solve dispatch shared by the command line and the HTTP service.
"""
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, TextIO, Union

from src.model.builtins import builtin, builtin_source
from src.model.parser import parse
from src.model.problem import NCSP
from src.parallel.runtime import run_parallel
from src.parallel.scheduler import ParallelResult, run_scheduled
from src.parallel.worker import ParallelConfig
from src.search.engine import solve_sequential
from src.search.state import RunStats, SolverConfig

logger = logging.getLogger(__name__)


@dataclass
class ProblemInput:
    """A parsed problem plus the text it came from"""
    problem: NCSP
    source: str
    name: Optional[str] = None

    @property
    def label(self) -> str:
        return self.name or self.problem.title or "problem"


def resolve_problem(name: Optional[str] = None, path: Optional[Union[str, Path]] = None,
                    source: Optional[str] = None) -> ProblemInput:
    """Exactly one of a builtin name, a problem file or problem text"""
    given = [value for value in (name, path, source) if value is not None]
    if len(given) != 1:
        raise ValueError("Give exactly one of a builtin problem name, a problem file or problem text")
    if name is not None:
        return ProblemInput(builtin(name), builtin_source(name), name)
    if path is not None:
        text = Path(path).read_text()
        return ProblemInput(parse(text, title=Path(path).stem), text)
    return ProblemInput(parse(source), source)


def execute(problem: NCSP, settings: SolverConfig, parallel: ParallelConfig,
            time_budget: Optional[float] = None, trace_path: Optional[Union[str, Path]] = None,
            seed: int = 0) -> ParallelResult:
    """Sequential engine for one worker, the scheduler when tracing, processes otherwise.

    The time budget applies on every path; exceeding it raises SolveTimeoutError.
    """
    if trace_path is not None:
        return run_scheduled(problem, settings, parallel, seed=seed, trace_path=trace_path, time_budget=time_budget)
    if parallel.worker_count == 1:
        paving, stats = solve_sequential(problem, settings, time_budget)
        return ParallelResult(paving, [stats], wall_time=stats.wall_time)
    return run_parallel(problem, settings, parallel, time_budget=time_budget)


def load_imbalance(worker_stats: List[RunStats]) -> float:
    """(max - min) / mean of boxes processed per worker, in percent"""
    processed = [s.prunes for s in worker_stats]
    total = sum(processed)
    if not processed or total == 0:
        return 0.0
    mean = total / len(processed)
    return (max(processed) - min(processed)) / mean * 100.0


def summarize_workers(worker_stats: List[RunStats], stream: Optional[TextIO] = None) -> str:
    """Per-worker statistics summary; written to stream when given"""
    branches = [s.branches for s in worker_stats]
    out = io.StringIO()
    out.write(f"Number of Workers:   {len(worker_stats):6d}\n")
    out.write(f"Load Imbalance:     {load_imbalance(worker_stats):6.2f}%\n")
    if branches:
        out.write(f" - min branches: {min(branches)}\n")
        out.write(f" - max branches: {max(branches)}\n")
    out.write(f"Boxes Sent:          {sum(s.sent_boxes for s in worker_stats):6d}\n")
    out.write(f"Box Batches Sent:    {sum(s.sent_batches for s in worker_stats):6d}\n")
    out.write(f"Load Reports Sent:   {sum(s.load_msgs for s in worker_stats):6d}\n")
    text = out.getvalue()
    if stream is not None:
        stream.write(text)
    return text
