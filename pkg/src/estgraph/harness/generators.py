"""Seeded graph generators.

Weighted variants draw each weight log-uniformly from ``weights = (lo, hi)``
and round it to an integer, so weights stay exact. The lightest edge is
pinned to ``ceil(lo)``; with ``lo = 1`` the result is already normalized and
stays integral.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from ..graph import Graph, build_graph

MODELS = ("path", "cycle", "grid", "gnm", "geometric")


def log_uniform_weights(rng: np.random.Generator, m: int, lo: float, hi: float) -> np.ndarray:
    if not 1 <= lo <= hi:
        raise ValueError("weight range must satisfy 1 <= lo <= hi")
    w = np.exp(rng.uniform(math.log(lo), math.log(hi), size=m))
    return np.clip(np.rint(w), math.ceil(lo), math.floor(hi))


def _finish(n: int, eu, ev, rng, weights) -> Graph:
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    if weights is None:
        w = np.ones(eu.size)
    else:
        w = log_uniform_weights(rng, eu.size, *weights)
        if w.size:
            w[np.argmin(w)] = math.ceil(weights[0])
    if n == 0:
        raise ValueError("empty graph")
    return build_graph(zip(eu.tolist(), ev.tolist(), w.tolist()), n, normalize=False)


def path_graph(n: int, weights=None, seed=0) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    rng = np.random.default_rng(seed)
    a = np.arange(n - 1)
    return _finish(n, a, a + 1, rng, weights)


def cycle_graph(n: int, weights=None, seed=0) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    rng = np.random.default_rng(seed)
    a = np.arange(n)
    return _finish(n, a, (a + 1) % n, rng, weights)


def grid_graph(rows: int, cols: int, weights=None, seed=0) -> Graph:
    if rows < 1 or cols < 1:
        raise ValueError("grid needs positive dimensions")
    rng = np.random.default_rng(seed)
    idx = np.arange(rows * cols).reshape(rows, cols)
    eu = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    ev = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return _finish(rows * cols, eu, ev, rng, weights)


def gnm_graph(n: int, m: int, weights=None, seed=0) -> Graph:
    """Uniform simple graph with exactly ``m`` edges."""
    total = n * (n - 1) // 2
    if n < 1 or not 0 <= m <= total:
        raise ValueError("gnm needs 0 <= m <= n(n-1)/2")
    rng = np.random.default_rng(seed)
    if total <= 2_000_000:
        code = np.sort(rng.choice(total, size=m, replace=False))
        # decode pair index into (u, v) with u < v, row-major
        u = (n - 2 - np.floor(np.sqrt(-8 * code + 4 * n * (n - 1) - 7) / 2 - 0.5)).astype(np.int64)
        v = code + u + 1 - total + (n - u) * ((n - u) - 1) // 2
    else:
        keys = np.zeros(0, dtype=np.int64)
        while keys.size < m:
            a = rng.integers(0, n, size=2 * m)
            b = rng.integers(0, n, size=2 * m)
            ok = a != b
            k = np.minimum(a, b)[ok] * n + np.maximum(a, b)[ok]
            allk = np.concatenate([keys, k])
            _, first = np.unique(allk, return_index=True)
            keys = allk[np.sort(first)]
        keys = np.sort(keys[:m])
        u, v = keys // n, keys % n
    return _finish(n, u, v, rng, weights)


def geometric_radius(n: int, degree: float) -> float:
    """Radius giving expected degree ``degree`` in the unit square."""
    if n < 2:
        raise ValueError("need n >= 2")
    target = degree / (n - 1)
    if not 0 < target < 1:
        raise ValueError("degree must lie in (0, n - 1)")

    def f(r):
        # probability that two uniform points of the unit square are within r
        return math.pi * r * r - 8 * r ** 3 / 3 + r ** 4 / 2 - target

    return brentq(f, 1e-12, 1.0)


def geometric_graph(n: int, degree: float = 8.0, weights=None, seed=0) -> Graph:
    rng = np.random.default_rng(seed)
    r = geometric_radius(n, degree)
    pts = rng.random((n, 2))
    pairs = cKDTree(pts).query_pairs(r, output_type="ndarray")
    if pairs.size:
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    else:
        pairs = np.zeros((0, 2), dtype=np.int64)
    return _finish(n, pairs[:, 0], pairs[:, 1], rng, weights)


def generate_graph(model: str, seed=0, weights: Optional[tuple] = None, **params) -> Graph:
    """Dispatch on ``model``; ``params`` are the model's size arguments."""
    try:
        if model == "path":
            return path_graph(int(params["n"]), weights, seed)
        if model == "cycle":
            return cycle_graph(int(params["n"]), weights, seed)
        if model == "grid":
            return grid_graph(int(params["rows"]), int(params["cols"]), weights, seed)
        if model == "gnm":
            return gnm_graph(int(params["n"]), int(params["m"]), weights, seed)
        if model == "geometric":
            return geometric_graph(int(params["n"]), float(params.get("degree", 8.0)), weights, seed)
    except KeyError as exc:
        raise ValueError(f"model {model!r} needs parameter {exc.args[0]!r}") from None
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
