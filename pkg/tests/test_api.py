"""Tests for the simulation HTTP API."""

import pytest

pytest.importorskip("fastapi")
pytest.importorskip("httpx")

from fastapi.testclient import TestClient  # noqa: E402

from backend.main import app  # noqa: E402


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "service": "vpquad-api"}


def test_cors_allows_any_origin_by_default(client):
    response = client.get("/health", headers={"Origin": "http://example.org"})
    assert response.status_code == 200
    assert response.headers["access-control-allow-origin"] == "*"


def test_trim_defaults(client):
    response = client.post("/api/v1/sim/trim", json={})
    assert response.status_code == 200
    body = response.json()
    assert body["thrust_coeff"] == pytest.approx(0.010178, abs=2e-6)
    assert body["collective_deg"] == pytest.approx(12.44, abs=0.02)
    assert body["residual"] < 1e-9


def test_trim_custom_config(client):
    response = client.post("/api/v1/sim/trim", json={"config_toml": "[vehicle]\nmass = 1.6\n"})
    assert response.status_code == 200
    assert response.json()["rotor_thrust"] == pytest.approx(1.6 * 9.81 / 4)


def test_bad_config_is_422(client):
    response = client.post("/api/v1/sim/trim", json={"config_toml": "[rotor]\nradius = -1\n"})
    assert response.status_code == 422
    assert "rotor.radius" in response.json()["detail"]


def test_short_run(client):
    response = client.post(
        "/api/v1/sim/run", json={"kind": "flip", "duration": 0.05, "decimation": 10, "include_telemetry": True}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["kind"] == "flip"
    assert body["error"] is None
    assert len(body["telemetry"]) == 6
    assert "t [s]" in body["telemetry"][0]
    assert body["summary"]["simulated_time"] == pytest.approx(0.05)


def test_run_rejects_unknown_kind(client):
    response = client.post("/api/v1/sim/run", json={"kind": "loop"})
    assert response.status_code == 422


def test_run_duration_below_dt_is_422(client):
    response = client.post("/api/v1/sim/run", json={"duration": 1e-4})
    assert response.status_code == 422


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
