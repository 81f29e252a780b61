import hashlib
import json
import logging
import sqlite3
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional

from src.search.state import RunStats

logger = logging.getLogger(__name__)


@dataclass
class RunRecord:
    """A finished solve as kept in the run store"""
    run_id: str
    problem: str
    epsilon: float
    workers: int
    config: Dict[str, Any]
    stats: RunStats
    boxes: int
    created_at: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "problem": self.problem,
            "epsilon": self.epsilon,
            "workers": self.workers,
            "config": self.config,
            "stats": self.stats.to_dict(),
            "boxes": self.boxes,
            "created_at": self.created_at.isoformat(),
        }


@dataclass
class Baseline:
    """Sequential reference timing for speedup columns"""
    problem_key: str
    epsilon: float
    wall_time: float
    branches: int
    created_at: datetime = field(default_factory=datetime.now)


def problem_key(name: Optional[str] = None, source: Optional[str] = None) -> str:
    """Builtin name, or file:<sha256> of the problem text"""
    if name:
        return name
    if source is None:
        raise ValueError("Either a builtin name or the problem source is required")
    return f"file:{hashlib.sha256(source.encode('utf-8')).hexdigest()}"


class RunStore:
    """Keeps solve runs and sequential baselines in SQLite"""

    def __init__(self, database_path: str = "ncsp_runs.db"):
        self.database_path = database_path
        self.runs: Dict[str, RunRecord] = {}
        self._setup_database()

    def _connect(self) -> sqlite3.Connection:
        return sqlite3.connect(self.database_path)

    def _setup_database(self):
        """Create the runs and baselines tables"""
        try:
            conn = self._connect()
            cursor = conn.cursor()

            cursor.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    run_id TEXT PRIMARY KEY,
                    problem TEXT NOT NULL,
                    epsilon REAL NOT NULL,
                    workers INTEGER NOT NULL,
                    config_json TEXT,
                    stats_json TEXT,
                    boxes INTEGER,
                    created_at TIMESTAMP
                )
            """)

            cursor.execute("""
                CREATE TABLE IF NOT EXISTS baselines (
                    problem_key TEXT NOT NULL,
                    epsilon REAL NOT NULL,
                    wall_time REAL NOT NULL,
                    branches INTEGER NOT NULL,
                    created_at TIMESTAMP,
                    PRIMARY KEY (problem_key, epsilon)
                )
            """)

            conn.commit()
            conn.close()
            logger.info(f"Run store ready at {self.database_path}")

        except Exception as e:
            logger.error(f"Error setting up run store: {e}")
            raise

    async def save_run(self, record: RunRecord):
        self.runs[record.run_id] = record
        try:
            conn = self._connect()
            conn.execute("""
                INSERT OR REPLACE INTO runs
                (run_id, problem, epsilon, workers, config_json, stats_json, boxes, created_at)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?)
            """, (
                record.run_id,
                record.problem,
                record.epsilon,
                record.workers,
                json.dumps(record.config),
                json.dumps(record.stats.to_dict()),
                record.boxes,
                record.created_at.isoformat(),
            ))
            conn.commit()
            conn.close()
        except Exception as e:
            logger.error(f"Error saving run {record.run_id}: {e}")

    async def get_run(self, run_id: str) -> Optional[RunRecord]:
        if run_id in self.runs:
            return self.runs[run_id]
        try:
            conn = self._connect()
            row = conn.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,)).fetchone()
            conn.close()
        except Exception as e:
            logger.error(f"Error loading run {run_id}: {e}")
            return None
        if not row:
            return None
        record = RunRecord(
            run_id=row[0],
            problem=row[1],
            epsilon=row[2],
            workers=row[3],
            config=json.loads(row[4]) if row[4] else {},
            stats=RunStats.from_dict(json.loads(row[5])) if row[5] else RunStats(),
            boxes=row[6] or 0,
            created_at=datetime.fromisoformat(row[7]),
        )
        self.runs[run_id] = record
        return record

    async def delete_run(self, run_id: str) -> bool:
        """Remove a run; False when it did not exist"""
        self.runs.pop(run_id, None)
        try:
            conn = self._connect()
            cursor = conn.execute("DELETE FROM runs WHERE run_id = ?", (run_id,))
            deleted = cursor.rowcount > 0
            conn.commit()
            conn.close()
            return deleted
        except Exception as e:
            logger.error(f"Error deleting run {run_id}: {e}")
            return False

    async def list_runs(self, limit: int = 50) -> List[str]:
        """Most recent run ids first"""
        try:
            conn = self._connect()
            rows = conn.execute(
                "SELECT run_id FROM runs ORDER BY created_at DESC LIMIT ?", (limit,)
            ).fetchall()
            conn.close()
            return [row[0] for row in rows]
        except Exception as e:
            logger.error(f"Error listing runs: {e}")
            return []

    async def get_baseline(self, key: str, epsilon: float) -> Optional[Baseline]:
        try:
            conn = self._connect()
            row = conn.execute(
                "SELECT problem_key, epsilon, wall_time, branches, created_at FROM baselines "
                "WHERE problem_key = ? AND epsilon = ?",
                (key, epsilon),
            ).fetchone()
            conn.close()
        except Exception as e:
            logger.error(f"Error loading baseline for {key}: {e}")
            return None
        if not row:
            return None
        return Baseline(row[0], row[1], row[2], row[3], datetime.fromisoformat(row[4]))

    async def save_baseline(self, baseline: Baseline):
        try:
            conn = self._connect()
            conn.execute("""
                INSERT OR REPLACE INTO baselines
                (problem_key, epsilon, wall_time, branches, created_at)
                VALUES (?, ?, ?, ?, ?)
            """, (
                baseline.problem_key,
                baseline.epsilon,
                baseline.wall_time,
                baseline.branches,
                baseline.created_at.isoformat(),
            ))
            conn.commit()
            conn.close()
            logger.info(f"Stored baseline for {baseline.problem_key} at eps={baseline.epsilon}")
        except Exception as e:
            logger.error(f"Error saving baseline for {baseline.problem_key}: {e}")
