"""HTTP surface: endpoints, schemas, and error mapping."""

import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from latsize.polytope import polytope_to_json, standard_simplex, unit_cube
from latsize.harness import reduction_gap_polytope
from latsize.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app, raise_server_exceptions=False)


def _doc(P):
    return polytope_to_json(P)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_width_endpoint(client):
    resp = client.post("/width", json=_doc(reduction_gap_polytope()))
    assert resp.status_code == 200
    body = resp.json()
    assert body["value"] == 1
    assert body["witness"]["A"][0] == body["direction"]


def test_ls_endpoint_methods(client):
    doc = _doc(reduction_gap_polytope())
    for method, value in [("brute", 13), ("slab", 14), ("reduced", 14), ("auto", 13)]:
        resp = client.post("/ls", json={"polytope": doc, "method": method})
        assert resp.status_code == 200, resp.text
        body = resp.json()
        assert body["value"] == value
        assert len(body["witness"]["A"]) == 3


def test_ls_endpoint_2d(client):
    doc = {"dim": 2, "vertices": [[0, 0], [3, 1], [1, 2]]}
    resp = client.post("/ls", json={"polytope": doc, "method": "2d"})
    assert resp.status_code == 200
    assert resp.json()["value"] == 4


def test_precondition_maps_to_422(client):
    doc = _doc(standard_simplex(3, 2))
    resp = client.post("/ls", json={"polytope": doc, "method": "slab"})
    assert resp.status_code == 422
    assert "width" in resp.json()["detail"]


def test_validation_error_maps_to_422(client):
    resp = client.post("/ls", json={"polytope": {"dim": 5, "vertices": []}})
    assert resp.status_code == 422


def test_reduce_endpoint(client):
    resp = client.post("/reduce", json=_doc(reduction_gap_polytope()))
    assert resp.status_code == 200
    body = resp.json()
    assert body["value"] == 11
    assert body["basis"]["norms"] == [1, 10, 11]
    assert body["basis"]["level"] == "reduced"


def test_reduce_rejects_2d(client):
    resp = client.post("/reduce", json=_doc(unit_cube(2)))
    assert resp.status_code == 422


def test_gen_endpoints(client):
    resp = client.post("/gen/white", json={"p": 7, "q": 5})
    assert resp.status_code == 200
    assert len(resp.json()["vertices"]) == 4

    resp = client.post("/gen/white", json={"p": 4, "q": 2})
    assert resp.status_code == 422

    resp = client.post(
        "/gen/width-one",
        json={"bound": 5, "n0": [3, 5], "n1": [3, 5], "seed": 1},
    )
    assert resp.status_code == 200
    assert resp.json()["dim"] == 3

    resp = client.post("/gen/random", json={"bound": 4, "n": [6, 9], "seed": 2})
    assert resp.status_code == 200
    again = client.post("/gen/random", json={"bound": 4, "n": [6, 9], "seed": 2})
    assert resp.json() == again.json()


def test_experiment_endpoint(client):
    resp = client.post(
        "/experiment", json={"id": 2, "trials": 2, "seed": 3, "bound": 5}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["experiment"] == 2
    assert all(rec["agree"] for rec in body["trials"])
