"""
Paving and statistics files.

Pavings are JSON lines, one {"status": ..., "box": [[lo, hi], ...]} object per
box; infinite endpoints are written as the strings "inf" and "-inf". Statistics
are a single JSON object.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, TextIO, Union

from src.contractor.prune import BoxStatus
from src.interval.box import Box
from src.search.state import Paving, RunStats

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def paving_lines(paving: Paving) -> List[str]:
    return [
        json.dumps({"status": entry.status.value, "box": entry.box.to_pairs()})
        for entry in paving
    ]


def write_paving(paving: Paving, path: PathLike) -> None:
    lines = paving_lines(paving)
    with open(path, "w") as handle:
        for line in lines:
            handle.write(line + "\n")
    logger.info(f"Wrote {len(lines)} boxes to {path}")


def parse_paving(handle: TextIO) -> Paving:
    paving = Paving()
    for number, line in enumerate(handle, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            status = BoxStatus(record["status"])
            paving.add(Box.from_pairs(record["box"]), status)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"Malformed paving record on line {number}: {exc}") from exc
    return paving


def read_paving(path: PathLike) -> Paving:
    with open(path) as handle:
        return parse_paving(handle)


def stats_payload(stats: RunStats, workers: List[RunStats] = None) -> Dict[str, Any]:
    payload = stats.to_dict()
    if workers:
        payload["workers"] = [w.to_dict() for w in workers]
    return payload


def write_stats(stats: RunStats, path: PathLike, workers: List[RunStats] = None) -> None:
    with open(path, "w") as handle:
        json.dump(stats_payload(stats, workers), handle, indent=2)
        handle.write("\n")


def read_stats(path: PathLike) -> RunStats:
    with open(path) as handle:
        return RunStats.from_dict(json.load(handle))
