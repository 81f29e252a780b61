import pytest

from src.cli.run_store import Baseline, RunRecord, RunStore, problem_key
from src.search.state import RunStats


@pytest.fixture
def store(tmp_path):
    return RunStore(str(tmp_path / "runs.db"))


def _record(run_id="run-1", problem="sphere-plane"):
    return RunRecord(
        run_id=run_id,
        problem=problem,
        epsilon=0.1,
        workers=4,
        config={"worker_count": 4, "ns": 100},
        stats=RunStats(branches=12, prunes=25, wall_time=0.5),
        boxes=9,
    )


@pytest.mark.asyncio
async def test_saved_run_survives_restart(store):
    await store.save_run(_record())
    reopened = RunStore(store.database_path)
    record = await reopened.get_run("run-1")
    assert record is not None
    assert record.stats == RunStats(branches=12, prunes=25, wall_time=0.5)
    assert record.config == {"worker_count": 4, "ns": 100}
    assert record.to_dict()["boxes"] == 9


@pytest.mark.asyncio
async def test_missing_run(store):
    assert await store.get_run("nope") is None
    assert await store.delete_run("nope") is False


@pytest.mark.asyncio
async def test_delete_run(store):
    await store.save_run(_record())
    assert await store.delete_run("run-1") is True
    assert await store.get_run("run-1") is None


@pytest.mark.asyncio
async def test_list_runs(store):
    for i in range(3):
        await store.save_run(_record(run_id=f"run-{i}"))
    assert sorted(await store.list_runs()) == ["run-0", "run-1", "run-2"]
    assert len(await store.list_runs(limit=2)) == 2


@pytest.mark.asyncio
async def test_baseline_keyed_on_problem_and_precision(store):
    await store.save_baseline(Baseline("sphere-plane", 0.1, 2.5, 400))
    found = await store.get_baseline("sphere-plane", 0.1)
    assert (found.wall_time, found.branches) == (2.5, 400)
    assert await store.get_baseline("sphere-plane", 0.05) is None

    await store.save_baseline(Baseline("sphere-plane", 0.1, 2.0, 400))
    assert (await store.get_baseline("sphere-plane", 0.1)).wall_time == 2.0


def test_problem_key():
    assert problem_key("3rpr-analog") == "3rpr-analog"
    key = problem_key(source="var x in [0, 1];")
    assert key.startswith("file:") and len(key) == len("file:") + 64
    assert problem_key(source="var x in [0, 1];") == key
    with pytest.raises(ValueError):
        problem_key()
