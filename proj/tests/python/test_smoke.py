import json
from pathlib import Path

import numpy as np
import pytest

import mstlens

DATA = Path(__file__).resolve().parents[2] / "data"


def blobs(per=30, seed=0):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0, 0, 0], [9, 0, 0, 0], [0, 9, 0, 0]])
    x = np.vstack([c + rng.normal(size=(per, 4)) for c in centers])
    labels = [l for l in "ABC" for _ in range(per)]
    return x, labels


def test_mst_matches_scipy():
    from scipy.sparse.csgraph import minimum_spanning_tree
    from scipy.spatial.distance import cdist

    x = np.random.default_rng(1).normal(size=(40, 3))
    edges = mstlens.mst_edges(x)
    assert len(edges) == 39
    expected = minimum_spanning_tree(cdist(x, x)).sum()
    assert sum(w for _, _, w in edges) == pytest.approx(expected, rel=1e-12)


def test_crossing_and_test():
    x, _ = blobs()
    g1, g2 = range(0, 30), range(30, 60)
    c = mstlens.crossing(x, g1, g2)
    assert c["total"] >= 1
    r = mstlens.mst_test(x, g1, g2, replicates=50, seed=4)
    assert r == mstlens.mst_test(x, g1, g2, replicates=50, seed=4)
    assert len(r["null_counts"]) == 50
    assert 0 < r["p_value"] <= 1
    with pytest.raises(ValueError):
        mstlens.mst_test(x, [0], [1, 2])


def test_rf_and_stability():
    x, labels = blobs()
    assert mstlens.rf_distance(x, labels, x, labels)["distance"] == 0.0
    s = mstlens.stability(x, labels, reps=4, seed=2)
    assert s["noise"].shape == (4,)
    assert s["permutation"].shape == (4,)


def test_projection_recovers_parabola():
    from scipy.spatial import procrustes

    t = np.linspace(-1, 1, 40)
    truth = np.column_stack([t, t**2])
    q, _ = np.linalg.qr(np.random.default_rng(3).normal(size=(20, 2)))
    x = truth @ q.T + 0.01 * np.random.default_rng(4).normal(size=(40, 20))
    out = mstlens.project(x, x, pca_dims=5)
    assert out["coords"].shape == (40, 2)
    assert out["canonical_correlations"][0] >= 0.99
    assert procrustes(truth, out["path_coords"])[2] < 0.05


def test_density_and_null_theory():
    d = mstlens.density(np.random.default_rng(0).normal(size=(50, 2)), 0.5, resolution=31)
    assert d["values"].shape == (31, 31)
    n = mstlens.null_density(40, 60, 0.3, 0.2)
    assert n["violation"] <= 1e-9
    with pytest.raises(ValueError):
        mstlens.null_density(40, 60, 0.3, 1.5)


def test_power_size():
    cell = mstlens.power(0.0, 5, trials=20, replicates=30, seed=1)
    assert cell["trials"] == 20
    assert cell["rate"] <= 0.25


def test_session_flow(tmp_path):
    store = mstlens.SessionStore(seed=3)
    s = store.create(
        data=str(DATA / "blobs_data.csv"),
        embedding=str(DATA / "blobs_embedding.csv"),
        labels=str(DATA / "blobs_labels.csv"),
        meta=str(DATA / "blobs_meta.csv"),
    )
    sid = s["id"]
    assert len(s["rows"]) == 120
    sel = store.select_path(sid, "r0", "r45")
    assert sel["path"][0] == "r0"
    assert store.project(sid, pca_dims=4)["coords"]
    t = store.test(sid, replicates=20, seed=5)
    assert t["replicates"] == 20
    assert store.heatmap(sid, features="f1,f2")["features"] in (["f1", "f2"], ["f2", "f1"])
    assert store.meta(sid)["categorical"][0]["column"] == "batch"
    snap = tmp_path / "snap.json"
    store.snapshot(sid, snap)
    assert json.loads(snap.read_text())["selection"]
    with pytest.raises(mstlens.ServiceError) as err:
        store.overview("missing")
    assert err.value.status == 404
