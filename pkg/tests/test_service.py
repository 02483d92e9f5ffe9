import math

import pytest
from fastapi.testclient import TestClient

from wavekit import DilationSpec, Region, ConvexCell, Vec, region_to_dict
from wavekit.construct import dilation_to_dict
from wavekit.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def scalar_region(client):
    resp = client.post("/construct", json={"type": "scalar", "dim": 2, "d": "2", "k": 1})
    assert resp.status_code == 200
    return resp.json()


def _cube_region_payload():
    cube = Region(
        [ConvexCell.from_box(Vec.zero(2), Vec.ones(2))],
        metadata={"dilation": dilation_to_dict(DilationSpec.for_scalar(2, 2))},
    )
    return region_to_dict(cube)


class TestHealth:
    def test_health(self, client):
        data = client.get("/health").json()
        assert data["status"] == "ok"


class TestConstructEndpoint:
    def test_scalar_summary(self, scalar_region):
        s = scalar_region["summary"]
        assert s["t"] == ["-2/3", "-2/3"]
        assert s["volume"] == "1"
        assert s["cells"] == 5

    def test_matrix_with_transpose_flag(self, client):
        resp = client.post(
            "/construct",
            json={
                "type": "matrix",
                "matrix": "3,0,0;0,3,0;1,0,-3",
                "transpose_given": True,
            },
        )
        assert resp.status_code == 200
        s = resp.json()["summary"]
        assert s["q"] == 1 and s["k"] == ["1", "1", "-1"]
        assert s["t"] == ["-3/4", "-3/4", "-5/8"]

    def test_unimodular_applied(self, client):
        resp = client.post(
            "/construct",
            json={
                "type": "scalar",
                "dim": 3,
                "d": "2",
                "k": 1,
                "unimodular": "1,0,0;-1,1,0;0,-1,1",
            },
        )
        assert resp.status_code == 200
        meta = resp.json()["region"]["metadata"]["construction"]
        assert meta["unimodular"] == [["1", "0", "0"], ["-1", "1", "0"], ["0", "-1", "1"]]

    def test_invalid_parameters_rejected(self, client):
        resp = client.post("/construct", json={"type": "scalar", "dim": 2, "d": "1"})
        assert resp.status_code == 400
        resp = client.post("/construct", json={"type": "scalar", "dim": 9, "d": "2"})
        assert resp.status_code == 400

    def test_q_search_failure_carries_attempts(self, client):
        resp = client.post(
            "/construct",
            json={
                "type": "matrix",
                "matrix": "2,0,1;0,-2,0;0,0,-2",
                "transpose_given": True,
                "q_max": 1,
            },
        )
        assert resp.status_code == 400
        detail = resp.json()["detail"]
        assert detail["attempts"][0]["q"] == 1


class TestVerifyEndpoint:
    def test_constructed_region_verifies(self, client, scalar_region):
        resp = client.post(
            "/verify", json={"region": scalar_region["region"], "mode": "exact"}
        )
        assert resp.status_code == 200
        data = resp.json()
        assert data["is_wavelet_set"] is True and data["exit_code"] == 0

    def test_cube_is_not_a_wavelet_set(self, client):
        resp = client.post("/verify", json={"region": _cube_region_payload()})
        data = resp.json()
        assert data["exit_code"] == 2
        assert data["translation"]["verdict"] == "pass"
        assert data["dilation"]["verdict"] == "fail"

    def test_missing_dilation_rejected(self, client):
        payload = _cube_region_payload()
        payload["metadata"] = {}
        resp = client.post("/verify", json={"region": payload})
        assert resp.status_code == 400

    def test_float_dilation_needs_mc_mode(self, client):
        payload = _cube_region_payload()
        float_dil = {
            "kind": "positive-scalar",
            "matrix": [[math.sqrt(2), 0.0], [0.0, math.sqrt(2)]],
        }
        resp = client.post(
            "/verify",
            json={"region": payload, "mode": "exact", "dilation": float_dil},
        )
        assert resp.status_code == 400
        resp = client.post(
            "/verify",
            json={
                "region": payload,
                "mode": "mc",
                "samples": 2000,
                "dilation": float_dil,
            },
        )
        assert resp.status_code == 200

    def test_mc_mode(self, client, scalar_region):
        resp = client.post(
            "/verify",
            json={"region": scalar_region["region"], "mode": "mc", "samples": 5000},
        )
        assert resp.json()["exit_code"] == 0


class TestInfoEndpoint:
    def test_hypothesis_satisfied_example(self, client):
        resp = client.post(
            "/info", json={"matrix": "3,0,0;0,3,0;1,0,-3", "transpose_given": True}
        )
        data = resp.json()
        assert data["power"] == 2 and data["scalar"] == "9"
        assert data["hypothesis_satisfied"] is True
        assert data["accepted_q"] == 1
        got = data["singular_values"]
        for v, want in zip(got, (3.54, 3.0, 2.54)):
            assert abs(v - want) < 0.01

    def test_hypothesis_violated_but_construction_succeeds(self, client):
        resp = client.post(
            "/info", json={"matrix": "2,0,1;0,-2,0;0,0,-2", "transpose_given": True}
        )
        data = resp.json()
        assert data["min_singular_exceeds_sqrt_dim"] is False
        assert data["hypothesis_satisfied"] is False
        assert data["accepted_q"] == 2

    def test_scalar_matrix(self, client):
        resp = client.post("/info", json={"matrix": "2,0;0,2"})
        data = resp.json()
        assert data["power"] == 1 and data["scalar"] == "2"


class TestExportEndpoint:
    def test_formats(self, client, scalar_region):
        for fmt, head in (("off", "OFF"), ("svg", "<svg"), ("csv", "x1,")):
            resp = client.post(
                "/export",
                json={"region": scalar_region["region"], "format": fmt, "samples": 200},
            )
            assert resp.status_code == 200
            data = resp.json()
            assert data["content"].startswith(head)
            assert data["filename"] == f"region.{fmt}"

    def test_slice_validation(self, client):
        resp = client.post(
            "/construct",
            json={"type": "neg-scalar", "dim": 3, "d": "2"},
        )
        region = resp.json()["region"]
        ok = client.post(
            "/export", json={"region": region, "format": "svg", "slice": "x3=0"}
        )
        assert ok.status_code == 200
        bad = client.post("/export", json={"region": region, "format": "svg"})
        assert bad.status_code == 400
