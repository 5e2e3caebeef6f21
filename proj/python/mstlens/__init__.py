"""MST-based separation tests, tree stability and path projection for labeled point clouds."""

import json

import numpy as np

from . import _core
from ._core import DegenerateError, ServiceError

__all__ = [
    "DegenerateError",
    "ServiceError",
    "SessionStore",
    "crossing",
    "density",
    "mst_edges",
    "mst_test",
    "null_density",
    "power",
    "project",
    "rf_distance",
    "stability",
]


def _points(x):
    return np.ascontiguousarray(np.asarray(x, dtype=float))


def mst_edges(points):
    """Edges of the Euclidean MST as a list of (u, v, weight)."""
    return [(int(e["u"]), int(e["v"]), e["weight"]) for e in json.loads(_core.mst_edges(_points(points)))]


def crossing(points, group1, group2):
    """Crossing statistic of two row groups on the MST of ``points``."""
    return json.loads(_core.crossing(_points(points), list(group1), list(group2)))


def mst_test(points, group1, group2, replicates=100, variance_threshold=0.9, seed=0):
    return json.loads(_core.mst_test(_points(points), list(group1), list(group2), replicates, variance_threshold, seed))


def rf_distance(points1, labels1, points2, labels2):
    """Normalized RF distance between the simplified medoid trees of two labeled clouds."""
    return json.loads(_core.rf_distance(_points(points1), list(labels1), _points(points2), list(labels2)))


def stability(points, labels, reps=30, noise_sd=None, seed=0):
    out = json.loads(_core.stability(_points(points), [str(l) for l in labels], reps, noise_sd, seed))
    out["noise"] = np.asarray(out["noise"])
    out["permutation"] = np.asarray(out["permutation"])
    return out


def project(x, path, pca_dims=10, degree=2, lam=None, folds=5):
    out = json.loads(_core.project(_points(x), _points(path), pca_dims, degree, lam, folds))
    for key in ("coords", "path_coords"):
        if key in out:
            out[key] = np.asarray(out[key])
    return out


def density(coords, bandwidth, resolution=101):
    out = json.loads(_core.density(_points(coords), bandwidth, resolution))
    out["values"] = np.asarray(out["values"])
    return out


def null_density(n1, n2, c, eps):
    return json.loads(_core.null_density(n1, n2, c, eps))


def power(c, p, trials=100, replicates=100, n_each=50, alpha=0.05, seed=0):
    return json.loads(_core.power(c, p, trials, replicates, n_each, alpha, seed))


class SessionStore:
    """In-process equivalent of the HTTP session API. Errors raise ServiceError with ``.status``."""

    def __init__(self, seed=None):
        self._store = _core.SessionStore(seed)

    def _call(self, op, session_id="", body=None):
        return json.loads(self._store.call(op, session_id, json.dumps(body) if body is not None else ""))

    def create(self, **request):
        return self._call("create", body=request)

    def overview(self, session_id):
        return self._call("overview", session_id)

    def select_path(self, session_id, a, b):
        return self._call("path", session_id, {"a": a, "b": b})

    def select_groups(self, session_id, **request):
        return self._call("groups", session_id, request)

    def project(self, session_id, **config):
        return self._call("project", session_id, config)

    def test(self, session_id, **request):
        return self._call("test", session_id, request)

    def heatmap(self, session_id, rows=None, features=None):
        body = {k: v for k, v in (("rows", rows), ("features", features)) if v is not None}
        return self._call("heatmap", session_id, body)

    def meta(self, session_id):
        return self._call("meta", session_id)

    def snapshot(self, session_id, path):
        return self._call("snapshot", session_id, {"path": str(path)})
