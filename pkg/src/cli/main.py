"""
Command line front end: solve, bench and plot.

Exit codes: 0 on success, 1 for usage, parse and I/O errors, 2 when the
solver itself fails (protocol fault, crashed worker, timeout).
"""
import argparse
import asyncio
import logging
import sys
import uuid
from dataclasses import asdict
from typing import List, Optional, Sequence

from config.environment import config
from src.cli.bench import BenchGrid, run_bench, write_csv
from src.cli.plot import write_rectangles
from src.cli.run_store import RunRecord, RunStore
from src.cli.solving import ProblemInput, execute, resolve_problem, summarize_workers
from src.parallel.messages import ProtocolError
from src.parallel.runtime import WorkerCrashError
from src.parallel.scheduler import TerminationViolation
from src.parallel.wire import WireFormatError
from src.parallel.worker import ParallelConfig
from src.search.export import read_paving, write_paving, write_stats
from src.search.state import SolverConfig, SolveTimeoutError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2

SOLVER_FAULTS = (ProtocolError, WorkerCrashError, SolveTimeoutError, TerminationViolation, WireFormatError)


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer (got {text})")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative (got {text})")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive (got {text})")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="ncsp", description="Parallel branch-and-prune solver for numerical constraints")
    parser.add_argument("--verbose", action="store_true", help="log progress at INFO level")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    solve = commands.add_parser("solve", help="compute a paving")
    source = solve.add_mutually_exclusive_group(required=True)
    source.add_argument("--problem", help="builtin problem name")
    source.add_argument("--file", help="problem file")
    solve.add_argument("--eps", type=_positive_float, default=config.EPSILON)
    solve.add_argument("--workers", type=_positive_int, default=config.WORKERS)
    solve.add_argument("--nbb", type=_positive_int, default=config.NBB)
    solve.add_argument("--ns", type=_positive_int, default=config.NS)
    solve.add_argument("--delta", type=_nonnegative_int, default=config.DELTA)
    solve.add_argument("--neighbors", type=int, choices=(2, 4), default=config.NEIGHBORS)
    solve.add_argument("--no-preprocess", dest="preprocess", action="store_false", default=config.PREPROCESS)
    solve.add_argument("--out", help="paving file (JSON lines)")
    solve.add_argument("--stats", help="statistics file (JSON)")
    solve.add_argument("--trace", help="run on the deterministic scheduler and write its replay log here")
    solve.add_argument("--seed", type=int, default=0, help="scheduler seed for --trace")
    solve.add_argument("--time-budget", type=_positive_float, default=None)
    solve.add_argument("--db", help="record the run in this run store")

    bench = commands.add_parser("bench", help="speedup table over a parameter grid")
    bench.add_argument("--problem", action="append", default=[], help="builtin problem (repeatable)")
    bench.add_argument("--file", action="append", default=[], help="problem file (repeatable)")
    bench.add_argument("--eps", type=_positive_float, default=config.EPSILON)
    bench.add_argument("--workers", type=_positive_int, nargs="+", default=[8])
    bench.add_argument("--neighbors", type=int, choices=(2, 4), nargs="+", default=[2, 4])
    bench.add_argument("--ns", type=_positive_int, nargs="+", default=[10, 100, 1000])
    bench.add_argument("--preprocess", choices=("on", "off", "both"), default="both")
    bench.add_argument("--nbb", type=_positive_int, default=config.NBB)
    bench.add_argument("--delta", type=_nonnegative_int, default=config.DELTA)
    bench.add_argument("--time-budget", type=_positive_float, default=None)
    bench.add_argument("--out", help="CSV file (stdout when omitted)")
    bench.add_argument("--db", default=config.DATABASE_PATH, help="run store holding sequential baselines")
    bench.add_argument("--no-cache", action="store_true", help="always rerun the sequential baseline")

    plot = commands.add_parser("plot", help="2-D rectangles of one or more pavings as CSV")
    plot.add_argument("pavings", nargs="+", help="paving files; each becomes one layer")
    plot.add_argument("--dims", type=int, nargs=2, default=[0, 1], metavar=("X", "Y"))
    plot.add_argument("--out", help="CSV file (stdout when omitted)")
    return parser


def cmd_solve(args) -> int:
    entry = resolve_problem(name=args.problem, path=args.file)
    settings = SolverConfig(epsilon=args.eps)
    parallel = ParallelConfig(
        worker_count=args.workers, nbb=args.nbb, ns=args.ns, delta=args.delta,
        neighborhood_size=args.neighbors, preprocess=args.preprocess,
    )
    result = execute(entry.problem, settings, parallel, time_budget=args.time_budget,
                     trace_path=args.trace, seed=args.seed)
    total = result.total

    if args.out:
        write_paving(result.paving, args.out)
    if args.stats:
        write_stats(total, args.stats, result.worker_stats if parallel.worker_count > 1 else None)
    if args.db:
        record = RunRecord(
            run_id=str(uuid.uuid4()), problem=entry.label, epsilon=settings.epsilon,
            workers=parallel.worker_count, config=asdict(parallel), stats=total, boxes=len(result.paving),
        )
        asyncio.run(RunStore(args.db).save_run(record))

    print(
        f"{entry.label}: {len(result.paving)} boxes ({total.inner} inner, {total.precise} precise), "
        f"{total.branches} branches, {result.wall_time:.3f}s on {parallel.worker_count} worker(s)"
    )
    if parallel.worker_count > 1:
        summarize_workers(result.worker_stats, sys.stdout)
    return EXIT_OK


def cmd_bench(args) -> int:
    entries: List[ProblemInput] = [resolve_problem(name=name) for name in args.problem]
    entries.extend(resolve_problem(path=path) for path in args.file)
    if not entries:
        raise UsageError("bench needs at least one --problem or --file")
    preprocess = {"on": (True,), "off": (False,), "both": (True, False)}[args.preprocess]
    grid = BenchGrid(
        worker_counts=args.workers, neighborhood_sizes=args.neighbors, ns_values=args.ns,
        preprocess_values=preprocess, nbb=args.nbb, delta=args.delta,
    )
    store = None if args.no_cache else RunStore(args.db)
    records = asyncio.run(run_bench(entries, SolverConfig(epsilon=args.eps), grid, store, args.time_budget))
    if args.out:
        with open(args.out, "w", newline="") as handle:
            write_csv(records, handle)
    else:
        write_csv(records, sys.stdout)
    return EXIT_OK


def cmd_plot(args) -> int:
    layers = [(path, read_paving(path)) for path in args.pavings]
    dims = (args.dims[0], args.dims[1])
    if args.out:
        with open(args.out, "w", newline="") as handle:
            write_rectangles(layers, dims, handle)
    else:
        write_rectangles(layers, dims, sys.stdout)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "plot": cmd_plot}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.INFO if (config.DEBUG or args.verbose) else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    try:
        config.validate_config()
        return COMMANDS[args.command](args)
    except SOLVER_FAULTS as e:
        logger.error(f"Solver failed: {e}")
        print(f"solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
