"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --n 20000 --m 80000 --repeat 3

Each kernel runs on the same inputs in both backends; outputs are compared
before timings are reported.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from estgraph._kernels import _pykernels
from estgraph.harness.generators import gnm_graph

try:
    from estgraph._kernels import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _cases(g, seed):
    rng = np.random.default_rng(seed)
    start = rng.exponential(10.0, g.n)
    centers = rng.choice(g.n, size=min(64, g.n), replace=False).astype(np.int64)
    h = max(1, int(np.sqrt(g.n)))
    return {
        "shifted_dijkstra": lambda k: k.shifted_dijkstra(g.indptr, g.adj, g.adj_w, g.adj_e, start),
        "bfs": lambda k: k.bfs(g.indptr, g.adj, 0),
        "hop_limited": lambda k: k.hop_limited(g.indptr, g.adj, g.adj_w, 0, h, -1),
        "center_distances": lambda k: k.center_distances(g.indptr, g.adj, g.adj_w, centers),
    }


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _equal(a, b):
    if isinstance(a, tuple):
        return all(_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--m", type=int, default=80000)
    ap.add_argument("--weights", type=float, nargs=2, default=(1, 1000))
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    a = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 2
    g = gnm_graph(a.n, a.m, weights=tuple(a.weights), seed=a.seed)
    rows = []
    for name, fn in _cases(g, a.seed).items():
        tp, op = _best(lambda: fn(_pykernels), a.repeat)
        tc, oc = _best(lambda: fn(_ckernels), a.repeat)
        rows.append({"kernel": name, "python_s": tp, "cython_s": tc,
                     "speedup": tp / tc if tc > 0 else float("inf"), "identical": _equal(op, oc)})
    if a.json:
        print(json.dumps(rows, indent=1))
    else:
        print(f"n={g.n} m={g.m} repeat={a.repeat}")
        print(f"{'kernel':<18} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}  same")
        for r in rows:
            print(f"{r['kernel']:<18} {r['python_s']:>11.4f} {r['cython_s']:>11.4f} {r['speedup']:>7.1f}x  {r['identical']}")
    return 0 if all(r["identical"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
