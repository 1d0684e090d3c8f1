import pytest
from fastapi.testclient import TestClient

import main

QUENCH = {"model": "quench", "omega1_i": 1.0, "omega1_f": 1.3, "omega2_i": 1.5, "omega2_f": 1.8, "J": 1.1}

@pytest.fixture(scope="module")
def client():
    return TestClient(main.create_app())

def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "healthy"
    assert body["name"] == "coupled-oscillators"

def test_info(client):
    body = client.get("/info").json()
    assert [p["name"] for p in body["presets"]] == ["fig1", "fig2", "fig3", "fig4"]
    assert "Gamma" in body["quantities"]
    assert body["solver"]["method"] == "DOP853"
    # unbounded step has no JSON float
    assert body["solver"]["max_step"] is None
    assert body["oracle"]["grid_points"] == 257

def test_simulate(client):
    body = client.post("/api/simulate", json={**QUENCH, "samples": 3, "t_end": 1.0}).json()
    assert body["ok"] is True
    assert len(body["records"]) == 3
    assert body["metadata"]["config"]["J"] == 1.1

def test_simulate_rejects_unknown_quantity(client):
    response = client.post("/api/simulate", json={**QUENCH, "quantities": ["entropy"]})
    assert response.status_code == 422

def test_simulate_incomplete_schedule(client):
    body = client.post("/api/simulate", json={"model": "quench", "omega1_i": 1.0}).json()
    assert body["ok"] is False
    assert body["error"] == "CONFIG_ERROR"

def test_unknown_figure(client):
    body = client.get("/api/figure/fig9").json()
    assert body["ok"] is False
    assert body["error"] == "CONFIG_ERROR"

def test_figure(client):
    body = client.get("/api/figure/fig3", params={"samples": 5, "t_end": 1.0}).json()
    assert body["ok"] is True
    assert set(body["panels"]) == {"fig3a", "fig3b", "fig3c"}
    assert len(body["panels"]["fig3a"]["records"]) == 15

def test_oracle_rejects_even_grid(client):
    body = client.get("/api/oracle", params={"preset": "fig3", "points": 64}).json()
    assert body["ok"] is False
    assert body["error"] == "VALIDATION_ERROR"
