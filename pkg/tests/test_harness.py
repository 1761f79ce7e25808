"""Experiment harness: reports, determinism, worker pools, replay data."""

import json

from latsize.harness import (
    REDUCTION_GAP_WITNESS,
    TrialRecord,
    _norm_class_minimum,
    reduction_gap_polytope,
    run_experiment,
)
from latsize.latticesize import ls_bruteforce
from latsize.polytope import l1, apply_map, UnimodularMap, dot


def _strip_times(report):
    out = json.loads(json.dumps(report))
    for rec in out["trials"]:
        rec["times"] = None
    out["summary"] = None
    out["params"] = None
    return out


def test_experiment_1_smoke():
    rep = run_experiment(1, trials=2, seed=3, bound=3)
    assert rep["experiment"] == 1
    batches = {r["batch"] for r in rep["trials"]}
    assert batches == {"general", "width_one"}
    assert len(rep["trials"]) == 4
    for rec in rep["trials"]:
        assert rec["values"]["brute"] >= 1
        assert rec["times"]["brute"] > 0
    summary = rep["summary"]["batches"]
    assert "median_time_brute" in summary["general"]


def test_experiment_2_agrees():
    rep = run_experiment(2, trials=3, seed=1, bound=6)
    assert all(rec["agree"] for rec in rep["trials"])
    assert {r["batch"] for r in rep["trials"]} == {"white", "prism"}
    for rec in rep["trials"]:
        assert rec["values"]["slab"] == rec["values"]["brute"]
    assert rep["summary"]["batches"]["white"]["agreement_rate"] == 1.0


def test_experiment_3_records_disagreements_with_replay_data():
    rep = run_experiment(3, trials=6, seed=2, bound=3)
    assert rep["summary"]["disagreement_rate"] is not None
    for rec in rep["trials"]:
        assert rec["values"]["reduced_search"] >= rec["values"]["brute"]
        if not rec["agree"]:
            assert rec["index"] in rep["summary"]["disagreements"]
            assert "polytope" in rec["extra"]


def test_experiment_4_reports_speedup():
    rep = run_experiment(4, trials=3, seed=4, bound=3)
    assert rep["summary"]["values_agree"]
    assert "median_speedup" in rep["summary"]


def test_reports_deterministic_modulo_times():
    a = run_experiment(3, trials=4, seed=9, bound=3)
    b = run_experiment(3, trials=4, seed=9, bound=3)
    assert _strip_times(a) == _strip_times(b)


def test_worker_pool_matches_sequential():
    a = run_experiment(2, trials=3, seed=5, bound=5)
    b = run_experiment(2, trials=3, seed=5, bound=5, workers=2)
    assert _strip_times(a) == _strip_times(b)


def test_trial_record_round_trip():
    rec = TrialRecord(0, "white", {"kind": "white"}, "abc", {"m": 1}, {"m": 0.5}, True)
    doc = rec.to_json()
    assert doc["batch"] == "white" and doc["agree"] is True
    json.dumps(doc)


def test_stored_witness_matrix_achieves_13():
    P = reduction_gap_polytope()
    shift = tuple(-min(dot(r, v) for v in P.vertices) for r in REDUCTION_GAP_WITNESS)
    img = apply_map(P, UnimodularMap(REDUCTION_GAP_WITNESS, shift))
    assert l1(img) == 13
    assert ls_bruteforce(P).value == 13


def test_norm_class_minimum_smoke():
    # on the unit cube all three norms are 1 and the best borders value is 3
    from latsize.polytope import unit_cube

    assert _norm_class_minimum(unit_cube(3), (1, 1, 1)) == 3


def test_bad_experiment_parameters():
    import pytest

    with pytest.raises(ValueError):
        run_experiment(9, trials=1, seed=0)
    with pytest.raises(ValueError):
        run_experiment(1, trials=0, seed=0)
