import asyncio
import logging
import sys
import os
import uuid
from contextlib import asynccontextmanager
from dataclasses import asdict
from typing import Any, Dict, List, Optional

# Add project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field
import uvicorn

# Local imports
from config.environment import config
from src.cli.run_store import RunRecord, RunStore
from src.cli.solving import execute, resolve_problem
from src.model.builtins import UnknownProblemError, builtin, list_builtins
from src.model.parser import ProblemParseError
from src.parallel.worker import ParallelConfig
from src.search.state import SolverConfig

# Setup logging
logging.basicConfig(
    level=logging.INFO if config.DEBUG else logging.WARNING,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Global run store
store: Optional[RunStore] = None


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager"""
    global store

    logger.info("Starting NCSP solver service...")
    try:
        config.validate_config()
        store = RunStore(config.DATABASE_PATH)
        logger.info("Run store initialized successfully")
        yield
    except Exception as e:
        logger.error(f"Failed to initialize run store: {e}")
        raise
    finally:
        store = None
        logger.info("NCSP solver service shutdown complete")


app = FastAPI(
    title="Parallel NCSP Solver",
    description="Branch-and-prune pavings of numerical constraint problems over intervals",
    version="1.0.0",
    lifespan=lifespan
)


# Pydantic models for API requests
class SolveRequest(BaseModel):
    problem: Optional[str] = None
    source: Optional[str] = None
    epsilon: float = Field(default=config.EPSILON, gt=0)
    workers: int = Field(default=1, ge=1)
    nbb: int = Field(default=config.NBB, ge=2)
    ns: int = Field(default=config.NS, ge=1)
    delta: int = Field(default=config.DELTA, ge=0)
    neighbors: int = config.NEIGHBORS
    preprocess: bool = config.PREPROCESS
    time_budget: Optional[float] = Field(default=None, gt=0)
    include_paving: bool = False


class ProblemInfo(BaseModel):
    name: str
    n: int
    e: int
    i: int


class SolveResponse(BaseModel):
    run_id: str
    problem: str
    boxes: int
    inner: int
    precise: int
    stats: Dict[str, Any]
    paving: Optional[List[Dict[str, Any]]] = None


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "service": "Parallel NCSP Solver",
        "version": "1.0.0"
    }


@app.get("/api/problems", response_model=List[ProblemInfo])
async def get_problems():
    """Builtin problems with their sizes"""
    infos = []
    for name in list_builtins():
        problem = builtin(name)
        infos.append(ProblemInfo(name=name, n=problem.n, e=problem.equation_count, i=problem.inequality_count))
    return infos


@app.post("/api/solve", response_model=SolveResponse)
async def solve(request: SolveRequest):
    """Solve a builtin or posted problem and record the run"""
    if not store:
        raise HTTPException(status_code=500, detail="Run store not initialized")

    try:
        entry = resolve_problem(name=request.problem, source=request.source)
        settings = SolverConfig(epsilon=request.epsilon)
        parallel = ParallelConfig(
            worker_count=request.workers, nbb=request.nbb, ns=request.ns, delta=request.delta,
            neighborhood_size=request.neighbors, preprocess=request.preprocess,
        )
    except (ProblemParseError, UnknownProblemError, ValueError) as e:
        logger.error(f"Rejected solve request: {e}")
        raise HTTPException(status_code=400, detail=str(e))

    try:
        result = await asyncio.to_thread(execute, entry.problem, settings, parallel, request.time_budget)
        total = result.total
        record = RunRecord(
            run_id=str(uuid.uuid4()),
            problem=entry.label,
            epsilon=settings.epsilon,
            workers=parallel.worker_count,
            config=asdict(parallel),
            stats=total,
            boxes=len(result.paving),
        )
        await store.save_run(record)

        paving = None
        if request.include_paving:
            paving = [{"status": e.status.value, "box": e.box.to_pairs()} for e in result.paving]
        return SolveResponse(
            run_id=record.run_id,
            problem=record.problem,
            boxes=record.boxes,
            inner=total.inner,
            precise=total.precise,
            stats=total.to_dict(),
            paving=paving,
        )
    except Exception as e:
        logger.error(f"Error solving {entry.label}: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/api/runs/{run_id}")
async def get_run(run_id: str):
    """Get a recorded run"""
    if not store:
        raise HTTPException(status_code=500, detail="Run store not initialized")

    record = await store.get_run(run_id)
    if not record:
        raise HTTPException(status_code=404, detail="Run not found")
    return record.to_dict()


@app.delete("/api/runs/{run_id}")
async def delete_run(run_id: str):
    """Delete a recorded run"""
    if not store:
        raise HTTPException(status_code=500, detail="Run store not initialized")

    if not await store.delete_run(run_id):
        raise HTTPException(status_code=404, detail="Run not found")
    return {"status": "deleted", "run_id": run_id}


if __name__ == "__main__":
    # Run the application
    uvicorn.run(
        "src.api.main:app",
        host=config.APP_HOST,
        port=config.APP_PORT,
        reload=config.DEBUG,
        log_level="info" if config.DEBUG else "warning"
    )
