import pytest
from fastapi.testclient import TestClient

from modeswitch.service import app

SHORT_CONFIG = """
[model]
name = double_tank

[grid]
t_horizon = 20.0
dt = 0.01

[schedule]
blocks = 0:10.0, 1:10.0

[optimizer]
alpha = 0.5
beta = 0.5
eta = 0.6
max_iters = 6
"""


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def run_body(client):
    response = client.post("/run", json={"config_text": SHORT_CONFIG})
    assert response.status_code == 200
    return response.json()


def test_health_and_models(client):
    assert client.get("/health").json()["status"] == "ok"
    listed = client.get("/models").json()
    assert "double_tank" in listed["builtin"]


def test_run_returns_all_artifacts(run_body):
    assert run_body["status"] == "MaxIters"
    names = set(run_body["artifacts"])
    assert names == {"trace.csv", "summary.json", "final_schedule.csv",
                     "trajectory.csv", "profile.csv"}
    trace_rows = run_body["artifacts"]["trace.csv"].strip().splitlines()
    assert trace_rows[0] == "k,J,D_sigma,mu_eta,lambda,j_backtracks,switch_count,alt_opt"
    assert len(trace_rows) == 1 + 6  # header + one row per visited schedule


def test_run_summary_fields(run_body):
    summary = run_body["summary"]
    assert summary["status"] == "MaxIters"
    assert summary["iterations"] == 6
    assert summary["final_cost"] < 71.0
    assert summary["wall_time_s"] > 0.0


def test_replay_reproduces_final_cost_bitwise(client, run_body):
    last_row = run_body["artifacts"]["trace.csv"].strip().splitlines()[-1]
    final_cost = float(last_row.split(",")[1])
    response = client.post("/replay", json={
        "config_text": SHORT_CONFIG,
        "schedule_csv": run_body["artifacts"]["final_schedule.csv"],
    })
    assert response.status_code == 200
    assert response.json()["cost"] == final_cost


def test_run_rejects_bad_config(client):
    response = client.post("/run", json={
        "config_text": SHORT_CONFIG.replace("alpha = 0.5", "alpha = 2.0")})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["error"] == "ConfigError"


def test_replay_rejects_wrong_length(client, run_body):
    truncated = "\n".join(
        run_body["artifacts"]["final_schedule.csv"].splitlines()[:100])
    response = client.post("/replay", json={
        "config_text": SHORT_CONFIG, "schedule_csv": truncated})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "LengthMismatch"


def test_replay_rejects_empty_schedule(client):
    response = client.post("/replay", json={
        "config_text": SHORT_CONFIG, "schedule_csv": ""})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "LengthMismatch"
