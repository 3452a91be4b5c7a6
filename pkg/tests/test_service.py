"""HTTP service tests via the in-process ASGI client."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from expgof.montecarlo import RngStream, sample_alternative, PowerAlternative
from expgof.service import app
from expgof.statistic import statistic_from_raw


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_datasets_listing(client):
    resp = client.get("/datasets")
    assert resp.json() == {"pyke1965": 31, "barlow1975": 107}


def test_dataset_values(client):
    body = client.get("/datasets/pyke1965").json()
    assert body["name"] == "pyke1965"
    assert len(body["values"]) == 31
    assert client.get("/datasets/nope").status_code == 404


def test_statistic_endpoint_dataset(client):
    resp = client.post("/statistic", json={"dataset": "pyke1965", "a": 1.0})
    assert resp.status_code == 200
    body = resp.json()
    assert body["n"] == 31
    assert body["statistic"] == pytest.approx(6.07e-4, rel=5e-3)


def test_statistic_endpoint_inline_data(client):
    data = [1.0, 2.0, 3.0, 4.0]
    resp = client.post("/statistic", json={"data": data, "a": 2.0})
    assert resp.json()["statistic"] == pytest.approx(
        statistic_from_raw(data, 2.0), rel=1e-12
    )


def test_statistic_rejects_auto(client):
    resp = client.post("/statistic", json={"dataset": "pyke1965", "a": "auto"})
    assert resp.status_code == 400


def test_sample_resolution_errors(client):
    assert client.post("/statistic", json={}).status_code == 400
    assert client.post(
        "/statistic", json={"data": [1.0], "dataset": "pyke1965"}
    ).status_code == 400
    assert client.post("/statistic", json={"data": []}).status_code == 400
    assert client.post("/statistic", json={"data": [1.0, -1.0]}).status_code == 400
    assert client.post("/statistic", json={"dataset": "unknown"}).status_code == 400


def test_validation_errors(client):
    assert client.post(
        "/statistic", json={"dataset": "pyke1965", "a": -1.0}
    ).status_code == 422
    assert client.post(
        "/test", json={"dataset": "pyke1965", "alpha": 1.5}
    ).status_code == 422
    assert client.post(
        "/test", json={"dataset": "pyke1965", "N": 10}
    ).status_code == 422


def test_test_endpoint(client):
    resp = client.post(
        "/test", json={"dataset": "pyke1965", "a": 1.0, "N": 2000, "seed": 0}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["n"] == 31
    assert not body["a_selected"]
    assert body["reject"] == (body["statistic"] >= body["critical_value"])
    assert 0.0 < body["p_value"] <= 1.0
    # identical request reproduces the simulation exactly
    again = client.post(
        "/test", json={"dataset": "pyke1965", "a": 1.0, "N": 2000, "seed": 0}
    ).json()
    assert again == body


def test_test_endpoint_small_n(client):
    resp = client.post("/test", json={"data": [1.0, 2.0], "a": 1.0, "N": 1000})
    assert resp.status_code == 400
    assert "/statistic" in resp.json()["detail"]


def test_test_endpoint_auto(client):
    x = sample_alternative(PowerAlternative("G", (2.0,)), 20, RngStream(3))
    resp = client.post(
        "/test",
        json={"data": list(x), "a": "auto", "N": 1000, "B": 100,
              "grid": [1.0, 2.0], "seed": 1},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["a_selected"]
    assert body["a"] in (1.0, 2.0)


def test_critical_value_endpoint(client):
    resp = client.post(
        "/critical-value", json={"n": 20, "a": 1.0, "alpha": 0.05, "N": 2000}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["critical_value"] > 0
    stricter = client.post(
        "/critical-value", json={"n": 20, "a": 1.0, "alpha": 0.01, "N": 2000}
    ).json()
    assert stricter["critical_value"] > body["critical_value"]


def test_select_a_endpoint(client):
    resp = client.post(
        "/select-a",
        json={"dataset": "pyke1965", "grid": [1.0, 2.0], "B": 100, "N": 1000},
    )
    assert resp.status_code == 200
    assert resp.json()["a"] in (1.0, 2.0)


def test_power_endpoint(client):
    resp = client.post(
        "/power",
        json={"alternatives": ["U"], "n": 10, "a": [1.0], "N": 1000, "seed": 2},
    )
    assert resp.status_code == 200
    cells = resp.json()["cells"]
    assert len(cells) == 1
    assert cells[0]["alternative"] == "U"
    assert 0.0 < cells[0]["power"] <= 1.0


def test_power_endpoint_data_driven(client):
    resp = client.post(
        "/power",
        json={"alternatives": ["U"], "n": 10, "a": [1.0, 2.0], "N": 1000,
              "B": 100, "data_driven": True, "seed": 2},
    )
    assert resp.status_code == 200
    cell = resp.json()["cells"][0]
    freq = cell["selection_frequency"]
    assert set(freq) == {"1.0", "2.0"}
    assert sum(freq.values()) == pytest.approx(1.0)


def test_eigen_endpoint(client):
    resp = client.post("/eigen", json={"a": [1.0], "m": 500})
    assert resp.status_code == 200
    cell = resp.json()[0]
    assert cell["delta1"] == pytest.approx(5.32e-3, rel=0.06)
    assert cell["residual"] < 1e-9


def test_efficiency_endpoint(client):
    resp = client.post(
        "/efficiency", json={"families": ["lfr"], "a": [1.0], "m": 500}
    )
    assert resp.status_code == 200
    cell = resp.json()[0]
    assert cell["family"] == "LFR"
    assert 0.0 < cell["efficiency"] <= 1.05


def test_unknown_family_maps_to_400(client):
    resp = client.post("/efficiency", json={"families": ["cauchy"], "a": [1.0]})
    assert resp.status_code == 400
