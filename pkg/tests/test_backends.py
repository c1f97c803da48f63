from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from estgraph import _kernels
from estgraph._kernels import _pykernels
from estgraph.harness.generators import gnm_graph, grid_graph

ck = pytest.importorskip("estgraph._kernels._ckernels")


def csr(g):
    return g.indptr, g.adj, g.adj_w, g.adj_e


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def test_default_backend_is_compiled():
    assert _kernels.BACKEND == "cython" and _kernels.compiled_available()


def test_env_forces_python():
    code = "from estgraph import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, ESTGRAPH_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 80), st.integers(0, 300), st.integers(0, 2 ** 32), st.booleans())
def test_shifted_dijkstra_identical(n, m, seed, weighted):
    g = gnm_graph(n, min(m, n * (n - 1) // 2), weights=(1, 7) if weighted else None, seed=seed)
    rng = np.random.default_rng(seed)
    # integer starts force many ties
    start = np.floor(rng.exponential(2.0, n))
    start[rng.random(n) < 0.3] = np.inf
    if not np.isfinite(start).any():
        start[0] = 0.0
    indptr, adj, w, e = csr(g)
    assert same(_pykernels.shifted_dijkstra(indptr, adj, w, e, start),
                ck.shifted_dijkstra(indptr, adj, w, e, start))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 80), st.integers(0, 300), st.integers(0, 2 ** 32))
def test_bfs_and_hop_limited_identical(n, m, seed):
    g = gnm_graph(n, min(m, n * (n - 1) // 2), weights=(1, 20), seed=seed)
    s = seed % n
    assert same(_pykernels.bfs(g.indptr, g.adj, s), ck.bfs(g.indptr, g.adj, s))
    for h in (0, 1, 3, n):
        a = _pykernels.hop_limited(g.indptr, g.adj, g.adj_w, s, h, -1)
        b = ck.hop_limited(g.indptr, g.adj, g.adj_w, s, h, -1)
        assert same(a, b)


def test_center_distances_identical():
    g = grid_graph(15, 15, weights=(1, 9), seed=2)
    centers = np.array([0, 7, 100, 224], dtype=np.int64)
    assert same(_pykernels.center_distances(g.indptr, g.adj, g.adj_w, centers),
                ck.center_distances(g.indptr, g.adj, g.adj_w, centers))


def test_pipeline_output_matches_across_backends():
    code = ("from estgraph.harness.generators import gnm_graph\n"
            "from estgraph.spanner import SpannerParams, weighted_spanner\n"
            "g = gnm_graph(300, 1200, weights=(1, 4096), seed=3)\n"
            "print(weighted_spanner(g, SpannerParams(k=3, seed=5)).to_json())\n")
    outs = []
    for force in ("1", "0"):
        env = dict(os.environ, ESTGRAPH_PURE_PYTHON=force)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.append(r.stdout)
    assert outs[0] == outs[1]


def test_benchmark_script_smoke(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--n", "300", "--m", "900", "--repeat", "1"]) == 0
    assert "shifted_dijkstra" in capsys.readouterr().out
