import pytest
from fastapi.testclient import TestClient

from config.environment import config
from src.api.main import app


@pytest.fixture
def client(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "DATABASE_PATH", str(tmp_path / "api.db"))
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_problems(client):
    response = client.get("/api/problems")
    assert response.status_code == 200
    sizes = {p["name"]: (p["n"], p["e"], p["i"]) for p in response.json()}
    assert sizes == {"3rpr-analog": (6, 3, 0), "sphere-plane": (4, 2, 0)}


def test_solve_then_fetch_and_delete(client):
    response = client.post("/api/solve", json={"problem": "sphere-plane", "epsilon": 0.6, "include_paving": True})
    assert response.status_code == 200
    body = response.json()
    assert body["boxes"] == body["inner"] + body["precise"] == len(body["paving"])
    assert body["stats"]["prunes"] == 2 * body["stats"]["branches"] + 1

    run = client.get(f"/api/runs/{body['run_id']}")
    assert run.status_code == 200
    assert run.json()["problem"] == "sphere-plane"

    assert client.delete(f"/api/runs/{body['run_id']}").status_code == 200
    assert client.get(f"/api/runs/{body['run_id']}").status_code == 404


def test_solve_posted_source(client):
    source = "var x in [0, 2]; ineq: x - 1 >= 0;"
    response = client.post("/api/solve", json={"source": source, "epsilon": 0.25})
    assert response.status_code == 200
    assert response.json()["paving"] is None


@pytest.mark.parametrize(
    "payload",
    [
        {"problem": "nonexistent"},
        {"source": "var x in [1, 0];"},
        {"problem": "sphere-plane", "source": "var x in [0, 1];"},
        {},
        {"problem": "sphere-plane", "neighbors": 3},
    ],
)
def test_rejected_requests(client, payload):
    assert client.post("/api/solve", json=payload).status_code == 400


def test_invalid_precision(client):
    assert client.post("/api/solve", json={"problem": "sphere-plane", "epsilon": 0}).status_code == 422


def test_unknown_run(client):
    assert client.get("/api/runs/missing").status_code == 404
    assert client.delete("/api/runs/missing").status_code == 404
