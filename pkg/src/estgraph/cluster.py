"""Exponential start time clustering.

Every vertex ``u`` draws a head start ``delta_u ~ Exp(beta)`` and each
vertex ``v`` joins the center minimizing ``dist(u, v) - delta_u``, ties going
to the smaller center id. The clusters come with shortest-path trees rooted
at their centers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .graph import Graph
from .sssp import dijkstra

MODES = ("exact", "rounds")


@dataclass(frozen=True)
class ClusterParams:
    beta: float
    confidence: float = 2.0
    seed: int = 0
    mode: str = "exact"

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if self.confidence < 1:
            raise ValueError("confidence must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    def diameter_bound(self, n: int) -> float:
        return self.confidence / self.beta * math.log(max(n, 2))


@dataclass(frozen=True, eq=False)
class Clustering:
    shifts: np.ndarray
    center: np.ndarray
    parent: np.ndarray
    parent_edge: np.ndarray
    key: np.ndarray
    order: np.ndarray = field(repr=False)
    mode: str = "exact"
    round_count: Optional[int] = None

    @property
    def n(self) -> int:
        return int(self.center.shape[0])

    @property
    def centers(self) -> np.ndarray:
        return np.unique(self.center)

    def labels(self) -> np.ndarray:
        """Dense cluster ids ordered by center id."""
        _, inv = np.unique(self.center, return_inverse=True)
        return inv.astype(np.int64)

    def sizes(self) -> dict[int, int]:
        c, k = np.unique(self.center, return_counts=True)
        return dict(zip(c.tolist(), k.tolist()))

    def forest_edges(self) -> np.ndarray:
        return np.sort(self.parent_edge[self.parent_edge >= 0])

    def members(self) -> list[np.ndarray]:
        """Vertex arrays per cluster, in ``labels()`` order."""
        lab = self.labels()
        order = np.argsort(lab, kind="stable")
        bounds = np.searchsorted(lab[order], np.arange(lab.max() + 2 if lab.size else 1))
        return [order[bounds[i]:bounds[i + 1]] for i in range(bounds.size - 1)]

    def tree_depth(self, g: Graph) -> np.ndarray:
        """Weighted depth of each vertex in its cluster tree."""
        depth = np.zeros(self.n)
        pe = self.parent_edge
        par = self.parent
        w = g.ew
        for v in self.order.tolist():
            p = par[v]
            if p >= 0:
                depth[v] = depth[p] + w[pe[v]]
        return depth


def sample_shifts(n: int, beta: float, seed) -> np.ndarray:
    """``n`` i.i.d. exponential shifts with rate ``beta`` (mean ``1/beta``)."""
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    return rng.exponential(1.0 / beta, size=n)


def est_cluster(g: Graph, p: ClusterParams, shifts=None) -> Clustering:
    """Cluster ``g`` by exponentially shifted start times.

    ``shifts`` overrides sampling. In ``exact`` mode every vertex starts at
    time ``max(delta) - delta_u`` and a multi-source Dijkstra with labels
    ``(time, center)`` settles each vertex on its lexicographic argmin. In
    ``rounds`` mode start times are truncated to integers and the search runs
    on unit time steps, which needs integer weights; ``round_count`` is the
    number of steps until the last vertex is claimed.
    """
    n = g.n
    if shifts is None:
        shifts = sample_shifts(n, p.beta, p.seed)
    shifts = np.array(shifts, dtype=np.float64)
    if shifts.shape != (n,):
        raise ValueError("need one shift per vertex")
    if n == 0:
        e = np.zeros(0, dtype=np.int64)
        return Clustering(shifts, e, e, e, np.zeros(0), e, p.mode, 0 if p.mode == "rounds" else None)
    if p.mode == "exact":
        start = shifts.max() - shifts
    else:
        if not g.is_integral:
            raise ValueError("rounds mode needs integer weights")
        fl = np.floor(shifts)
        start = fl.max() - fl
    tie, key, parent, parent_edge, order = _kernels.shifted_dijkstra(
        g.indptr, g.adj, g.adj_w, g.adj_e, start)
    rc = None
    if p.mode == "rounds":
        rc = int(key.max()) + 1
    for a in (shifts, tie, parent, parent_edge, key, order):
        a.setflags(write=False)
    return Clustering(shifts, tie, parent, parent_edge, key, order, p.mode, rc)


@dataclass
class ClusterStats:
    centers: np.ndarray
    sizes: np.ndarray
    diameters: np.ndarray
    radii: np.ndarray
    cut_edges: np.ndarray

    @property
    def max_diameter(self) -> float:
        return float(self.diameters.max()) if self.diameters.size else 0.0

    @property
    def max_radius(self) -> float:
        return float(self.radii.max()) if self.radii.size else 0.0

    @property
    def num_clusters(self) -> int:
        return int(self.centers.size)


def cluster_diagnostics(g: Graph, c: Clustering) -> ClusterStats:
    """Tree diameter and radius per cluster, cut edges and sizes.

    Diameters and radii are measured along the cluster trees with the edge
    weights of ``g`` (hops for unweighted graphs).
    """
    n = g.n
    centers, labels, sizes = np.unique(c.center, return_inverse=True, return_counts=True)
    depth = c.tree_depth(g)
    radii = np.zeros(centers.size)
    np.maximum.at(radii, labels, depth)
    # longest and second longest downward branch per vertex, leaves first
    best1 = np.zeros(n)
    best2 = np.zeros(n)
    par = c.parent
    pe = c.parent_edge
    w = g.ew
    for v in c.order[::-1].tolist():
        p = par[v]
        if p < 0:
            continue
        cand = best1[v] + w[pe[v]]
        if cand > best1[p]:
            best2[p] = best1[p]
            best1[p] = cand
        elif cand > best2[p]:
            best2[p] = cand
    diam = np.zeros(centers.size)
    np.maximum.at(diam, labels, best1 + best2)
    cut = np.nonzero(c.center[g.eu] != c.center[g.ev])[0].astype(np.int64)
    return ClusterStats(centers, sizes, diam, radii, cut)


def ball(g: Graph, v: int, r: float) -> np.ndarray:
    res = dijkstra(g, v, limit=r)
    return np.nonzero(res.dist <= r)[0]


def clusters_meeting_ball(g: Graph, c: Clustering, v: int, r: float) -> np.ndarray:
    """Centers of clusters that contain a vertex within distance ``r`` of ``v``."""
    return np.unique(c.center[ball(g, v, r)])
