"""Distance engines: BFS, Dijkstra, integer-weight BFS and hop-limited search."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.sparse.csgraph import dijkstra as _scipy_dijkstra

from . import _kernels
from .graph import Graph, _merge_min, from_canonical


class _Unreachable:
    """Distance sentinel that orders above every number."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNREACHABLE"

    def __float__(self):
        return math.inf

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("UNREACHABLE")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


UNREACHABLE = _Unreachable()


def as_scalar(x: float):
    """Map ``inf`` to ``UNREACHABLE``; other values pass through as float."""
    return UNREACHABLE if x == math.inf else float(x)


def is_unreachable(x) -> bool:
    return x is UNREACHABLE or (isinstance(x, float) and x == math.inf)


@dataclass
class DistanceResult:
    sources: tuple
    dist: np.ndarray
    rounds: int
    parent: Optional[np.ndarray] = None

    def __getitem__(self, v: int):
        return as_scalar(self.dist[v])

    def reachable(self) -> np.ndarray:
        return np.isfinite(self.dist)


def _as_graph(g) -> Graph:
    return getattr(g, "graph", g)


def _sources(s) -> list[int]:
    if isinstance(s, (int, np.integer)):
        return [int(s)]
    return [int(x) for x in s]


def bfs(g: Graph, source) -> DistanceResult:
    """Hop distances from ``source``; ``rounds`` is the number of BFS levels."""
    g = _as_graph(g)
    if not g.is_unweighted:
        raise ValueError("bfs needs an unweighted graph")
    srcs = _sources(source)
    if len(srcs) == 1:
        hop = _kernels.bfs(g.indptr, g.adj, srcs[0])
    else:
        hop = np.full(g.n, -1, dtype=np.int64)
        for s in srcs:
            h = _kernels.bfs(g.indptr, g.adj, s)
            upd = (h >= 0) & ((hop < 0) | (h < hop))
            hop[upd] = h[upd]
    dist = np.where(hop >= 0, hop.astype(np.float64), np.inf)
    return DistanceResult(tuple(srcs), dist, int(hop.max()) if hop.size else 0)


def dijkstra(g: Graph, source, limit: float = np.inf) -> DistanceResult:
    """Exact shortest paths (scipy); ``rounds`` counts settled vertices."""
    g = _as_graph(g)
    srcs = _sources(source)
    if g.n == 0:
        return DistanceResult(tuple(srcs), np.zeros(0), 0)
    mat = g.to_scipy()
    dist, pred = _scipy_dijkstra(mat, directed=False, indices=srcs, min_only=True,
                                 return_predecessors=True, limit=limit)[:2]
    dist = np.asarray(dist, dtype=np.float64)
    return DistanceResult(tuple(srcs), dist, int(np.isfinite(dist).sum()), pred)


def all_pairs(g: Graph) -> np.ndarray:
    g = _as_graph(g)
    if g.n == 0:
        return np.zeros((0, 0))
    return _scipy_dijkstra(g.to_scipy(), directed=False)


def weighted_bfs(g, sources) -> DistanceResult:
    """Integer-weight search from ``sources`` in unit time steps.

    An edge of weight ``w`` takes ``w`` steps to traverse, so a vertex is
    reached at the step equal to its distance. The step count reported in
    ``rounds`` is therefore the largest finite distance.
    """
    g = _as_graph(g)
    if not g.is_integral:
        raise ValueError("weighted_bfs needs integer weights")
    srcs = _sources(sources)
    start = np.full(g.n, np.inf)
    start[srcs] = 0.0
    tie, key, parent, _, _ = _kernels.shifted_dijkstra(g.indptr, g.adj, g.adj_w, g.adj_e, start)
    fin = key[np.isfinite(key)]
    rounds = int(fin.max()) if fin.size else 0
    return DistanceResult(tuple(srcs), key, rounds, parent)


def augment(g: Graph, extra) -> Graph:
    """``g`` plus extra edges ``(u, v, w)``; parallel pairs keep the minimum."""
    g = _as_graph(g)
    eu, ev, ew = _extra_arrays(extra)
    if eu.size == 0:
        return g
    a, b, w, _ = _merge_min(g.n, np.concatenate([g.eu, eu]), np.concatenate([g.ev, ev]),
                            np.concatenate([g.ew, ew]))
    return from_canonical(g.n, a, b, w)


def _extra_arrays(extra):
    if extra is None:
        z = np.zeros(0, dtype=np.int64)
        return z, z, np.zeros(0)
    if hasattr(extra, "edge_arrays"):
        return extra.edge_arrays()
    rows = list(extra)
    if not rows:
        z = np.zeros(0, dtype=np.int64)
        return z, z, np.zeros(0)
    arr = np.array([(r[0], r[1], r[2]) for r in rows], dtype=np.float64)
    return arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64), arr[:, 2]


@dataclass
class HopSearch:
    dist: np.ndarray
    trace: np.ndarray
    rounds: int

    def hops_to_reach(self, bound: float) -> Optional[int]:
        """Fewest rounds after which the traced distance is ``<= bound``."""
        hit = np.nonzero(self.trace <= bound)[0]
        return int(hit[0]) if hit.size else None


def hop_limited_search(g: Graph, source: int, h: int, target: int = -1) -> HopSearch:
    """``h`` synchronous relaxation rounds from ``source``.

    ``trace[r]`` is the best weight of a path to ``target`` using at most
    ``r`` edges. The loop stops early once a round changes nothing, so the
    trace may be shorter than ``h + 1``; missing entries equal the last one.
    """
    g = _as_graph(g)
    if h < 0:
        raise ValueError("hop budget must be nonnegative")
    dist, trace, rounds = _kernels.hop_limited(g.indptr, g.adj, g.adj_w, int(source), int(h), int(target))
    return HopSearch(dist, trace, int(rounds))


def hop_limited_distance(g: Graph, extra, s: int, t: int, h: int):
    """Lightest ``s``-``t`` path with at most ``h`` edges from ``E`` plus ``extra``.

    ``extra`` is ``None``, a ``Hopset`` or an iterable of ``(u, v, w)``.
    Returns ``UNREACHABLE`` when no such path exists.
    """
    if s == t:
        return 0.0
    aug = augment(g, extra)
    res = hop_limited_search(aug, s, h, t)
    return as_scalar(res.dist[t])


def hop_profile(g: Graph, extra, s: int, t: int, h: int) -> np.ndarray:
    """``out[r]`` = ``r``-hop distance from ``s`` to ``t`` for ``r = 0..h``."""
    aug = augment(g, extra)
    res = hop_limited_search(aug, s, h, t)
    out = np.empty(h + 1)
    k = res.trace.size
    out[:k] = res.trace
    out[k:] = res.trace[-1]
    return out
