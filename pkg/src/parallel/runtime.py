"""
Multiprocessing runtime: one OS process per worker, one inbox queue per
worker carrying wire-encoded records, and a result queue read by the parent.
"""
import logging
import multiprocessing
import queue
import time
import traceback
from typing import List, Optional

from config.environment import config
from src.model.problem import NCSP
from src.parallel import wire
from src.parallel.messages import Outbox
from src.parallel.scheduler import ParallelResult
from src.parallel.worker import ParallelConfig, WorkerRuntime
from src.search.state import Paving, RunStats, SolverConfig, SolveTimeoutError

logger = logging.getLogger(__name__)


class WorkerCrashError(RuntimeError):
    """Raised when a worker process fails or dies"""


def _post(inboxes, outbox: Outbox):
    for target, message in outbox:
        inboxes[target].put(wire.encode(message))


def _serve(runtime: WorkerRuntime, inboxes, poll_seconds: float):
    inbox = inboxes[runtime.id]
    _post(inboxes, runtime.start())
    while not runtime.terminated:
        while True:
            try:
                record = inbox.get_nowait()
            except queue.Empty:
                break
            _post(inboxes, runtime.deliver(wire.decode(record)))
        if runtime.terminated:
            break
        if runtime.wants_to_work():
            _post(inboxes, runtime.work())
            continue
        try:
            record = inbox.get(timeout=poll_seconds)
        except queue.Empty:
            continue
        _post(inboxes, runtime.deliver(wire.decode(record)))


def _worker_main(worker_id: int, problem: NCSP, settings: SolverConfig, parallel: ParallelConfig,
                 inboxes, results, poll_seconds: float):
    started = time.perf_counter()
    try:
        runtime = WorkerRuntime(worker_id, problem, settings, parallel)
        _serve(runtime, inboxes, poll_seconds)
        if worker_id != 0:
            # only stale load reports can still be queued; worker 0 must flush its Terminate records
            for inbox in inboxes:
                inbox.cancel_join_thread()
        runtime.stats.wall_time = time.perf_counter() - started
        results.put(("done", worker_id, runtime.paving, runtime.stats))
    except Exception as exc:
        results.put(("error", worker_id, f"{type(exc).__name__}: {exc}", traceback.format_exc()))


def _run_inline(problem: NCSP, settings: SolverConfig, parallel: ParallelConfig,
                time_budget: Optional[float] = None) -> ParallelResult:
    started = time.perf_counter()
    deadline = started + time_budget if time_budget else None
    runtime = WorkerRuntime(0, problem, settings, parallel)
    runtime.start()
    while not runtime.terminated:
        if deadline is not None and time.perf_counter() > deadline:
            raise SolveTimeoutError(f"Inline solve exceeded its budget of {time_budget}s")
        runtime.work()
    wall_time = time.perf_counter() - started
    runtime.stats.wall_time = wall_time
    return ParallelResult(runtime.paving, [runtime.stats], wall_time=wall_time)


def run_parallel(problem: NCSP, settings: SolverConfig, parallel: ParallelConfig,
                 time_budget: Optional[float] = None, poll_seconds: Optional[float] = None,
                 start_method: Optional[str] = None) -> ParallelResult:
    """Solve with parallel.worker_count processes and merge their pavings in worker order"""
    if parallel.worker_count == 1:
        return _run_inline(problem, settings, parallel, time_budget)

    poll_seconds = config.POLL_SECONDS if poll_seconds is None else poll_seconds
    context = multiprocessing.get_context(start_method or config.START_METHOD or None)
    inboxes = [context.Queue() for _ in range(parallel.worker_count)]
    results = context.Queue()
    processes = [
        context.Process(
            target=_worker_main,
            args=(i, problem, settings, parallel, inboxes, results, poll_seconds),
            name=f"ncsp-worker-{i}",
            daemon=True,
        )
        for i in range(parallel.worker_count)
    ]

    started = time.perf_counter()
    deadline = started + time_budget if time_budget else None
    for process in processes:
        process.start()
    logger.info(f"Started {len(processes)} worker processes")

    pavings: List[Optional[Paving]] = [None] * parallel.worker_count
    stats: List[Optional[RunStats]] = [None] * parallel.worker_count
    try:
        remaining = parallel.worker_count
        while remaining:
            if deadline is not None and time.perf_counter() > deadline:
                raise SolveTimeoutError(f"Parallel solve exceeded its budget of {time_budget}s")
            try:
                outcome = results.get(timeout=0.1)
            except queue.Empty:
                dead = [
                    i for i, process in enumerate(processes)
                    if stats[i] is None and not process.is_alive() and process.exitcode not in (None, 0)
                ]
                if dead:
                    raise WorkerCrashError(
                        f"Worker(s) {dead} exited with codes {[processes[i].exitcode for i in dead]}"
                    )
                continue
            if outcome[0] == "error":
                _, worker_id, message, details = outcome
                logger.error(f"Worker {worker_id} failed: {message}\n{details}")
                raise WorkerCrashError(f"Worker {worker_id} failed: {message}")
            _, worker_id, paving, worker_stats = outcome
            pavings[worker_id] = paving
            stats[worker_id] = worker_stats
            remaining -= 1
    finally:
        for process in processes:
            if process.is_alive():
                process.join(timeout=1.0)
            if process.is_alive():
                process.terminate()
                process.join()

    wall_time = time.perf_counter() - started
    logger.info(f"Parallel solve finished in {wall_time:.3f}s")
    return ParallelResult(Paving.merge(pavings), stats, wall_time=wall_time)
