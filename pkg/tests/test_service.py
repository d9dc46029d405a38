"""HTTP surface: endpoints, validation mapping, JSON float fidelity."""

import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from odeverify.config import ExperimentConfig, resolve_config
from odeverify.experiments import run_experiment
from odeverify.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestMeta:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"

    def test_models(self, client):
        body = client.get("/models").json()
        names = {m["name"]: m for m in body}
        assert set(names) == {"linear-decay", "lorenz1990"}
        assert names["linear-decay"]["has_exact_solution"] is True
        assert names["lorenz1990"]["dimension"] == 3
        assert names["lorenz1990"]["default_initial_state"] == [2.0, 1.0, 0.0]


class TestRunEndpoint:
    def test_happy_path(self, client):
        resp = client.post(
            "/run",
            json={"model": "linear-decay", "method": "euler", "dt": 0.05, "t_end": 0.3},
        )
        assert resp.status_code == 200
        body = resp.json()
        traj = body["trajectory"]
        assert traj["states"] == [[0.5**n] for n in range(7)]
        assert traj["terminated_early"] is None
        assert body["config"]["command"] == "run"
        assert body["config"]["out_interval"] == 0.05

    def test_floats_cross_json_exactly(self, client):
        # service result must equal the in-process library result bit for bit
        cfg = {"model": "lorenz1990", "method": "taylor:5", "dt": 1e-3,
               "t_end": 1.0, "out_interval": 0.1}
        via_http = client.post("/run", json=cfg).json()["trajectory"]
        direct = run_experiment(resolve_config(ExperimentConfig(**cfg), "run"))
        assert np.array_equal(np.array(via_http["states"]), direct.states)
        assert np.array_equal(np.array(via_http["times"]), direct.times)

    def test_domain_error_is_400(self, client):
        resp = client.post(
            "/run",
            json={"model": "linear-decay", "method": "euler", "dt": 0.05,
                  "t_end": 0.3, "out_interval": 0.07},
        )
        assert resp.status_code == 400
        body = resp.json()
        assert body["error"] == "ConfigurationError"
        assert "integer multiple" in body["detail"]

    def test_missing_required_is_400(self, client):
        resp = client.post("/run", json={"method": "euler", "dt": 0.05, "t_end": 0.3})
        assert resp.status_code == 400
        assert "model" in resp.json()["detail"]

    def test_unknown_model_is_400(self, client):
        resp = client.post(
            "/run",
            json={"model": "lorenz1963", "method": "euler", "dt": 0.05, "t_end": 0.3},
        )
        assert resp.status_code == 400

    def test_malformed_body_is_422(self, client):
        resp = client.post("/run", json={"dt": "not a number", "model": 3})
        assert resp.status_code == 422

    def test_unknown_field_is_422(self, client):
        resp = client.post("/run", json={"model": "linear-decay", "step": 0.05})
        assert resp.status_code == 422

    def test_overflow_is_not_an_error(self, client):
        resp = client.post(
            "/run",
            json={"model": "linear-decay", "method": "euler", "dt": 0.25,
                  "t_end": 500.0, "out_interval": 25.0},
        )
        assert resp.status_code == 200
        assert resp.json()["trajectory"]["terminated_early"] == "overflow"


class TestExperimentEndpoints:
    def test_fig1(self, client):
        body = client.post("/fig1", json={}).json()
        assert body["run_a"]["states"][6] == [0.015625]
        assert body["run_b"]["states"][5] == [pytest.approx(0.01024, abs=1e-12)]
        assert body["pair_difference"]["values"][1] == pytest.approx(0.005385, abs=1e-9)
        assert body["comparison_interval"] == pytest.approx(0.3)
        exact_at_03 = body["exact"]["states"][30][0]
        assert exact_at_03 == pytest.approx(math.exp(-3.0), rel=1e-12)

    def test_fig2_quick(self, client):
        body = client.post("/fig2", json={"t_end": 1.0, "dt": 1e-2, "dt2": 1e-3}).json()
        assert body["scale"] == "desk"
        assert body["report"]["onset"] is None
        assert len(body["difference"]["times"]) == 101

    def test_compare(self, client):
        body = client.post(
            "/compare",
            json={"model": "linear-decay", "dt": 1e-3, "t_end": 1.0, "out_interval": 0.1},
        ).json()
        assert body["max_difference"] < 1e-9

    def test_refine_converged(self, client):
        body = client.post(
            "/refine",
            json={"model": "linear-decay", "method": "euler", "dt": 0.1,
                  "t_end": 1.0, "epsilon": 1e-4, "max_levels": 12},
        ).json()
        assert body["converged"] is True
        assert body["ladder"][0]["max_diff"] is None
        assert body["ladder"][-1]["max_diff"] < 1e-4

    def test_refine_not_converged(self, client):
        body = client.post(
            "/refine",
            json={"model": "linear-decay", "method": "euler", "dt": 0.1,
                  "t_end": 1.0, "epsilon": 1e-4, "max_levels": 1},
        ).json()
        assert body["converged"] is False

    def test_order(self, client):
        body = client.post(
            "/order", json={"model": "linear-decay", "method": "euler"}
        ).json()
        assert body["order"] == pytest.approx(1.0, abs=0.1)
        assert len(body["points"]) == 4

    def test_stability_rows_use_class_key(self, client):
        body = client.post(
            "/stability",
            json={"model": "linear-decay", "method": "euler", "dt": 0.05, "t_end": 0.1},
        ).json()
        assert body["rows"][0]["class"] == "locally-stable"
        assert body["rows"][0]["max_real_part"] == -10.0
