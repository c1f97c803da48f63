"""Hierarchical weight decomposition and query mapping.

Edges are grouped into categories ``E_i = {e : b**i <= w(e) < b**(i+1)}``
with ``b = n / eps``. With ``q(1) < ... < q(k)`` the non-empty categories
and ``P_j`` the union of categories up to ``j``, tree level ``j`` holds the
components of ``G[P_q(j)]``; level 0 are the single vertices.

A pair whose lowest common tree level is ``j`` is answered on query graph
``j``: the edges of ``P_q(j+1)`` with the components of ``P_q(j-2)``
contracted. Heavier edges cannot lie on the shortest path and the
contracted edges are lighter than the path by a factor ``n / eps`` at least
twice over, so the contraction loses at most an ``eps`` fraction. Lighter
tree levels may be contracted only two categories down, so every edge
lives in at most three query graphs. Quotient vertices without edges are
trimmed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from ..graph import Graph, QuotientGraph, bucket_edges, connected_components, from_canonical, quotient


@dataclass(frozen=True, eq=False)
class QueryGraph:
    level: int
    graph: Graph
    vertex_map: np.ndarray
    edge_witness: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(eq=False)
class WeightDecomposition:
    n: int
    epsilon: float
    base: Fraction
    categories: list
    edge_level: np.ndarray
    components: list
    query_graphs: list

    @property
    def depth(self) -> int:
        return len(self.categories)

    def lca_level(self, s: int, t: int) -> Optional[int]:
        """Lowest tree level whose node contains both ``s`` and ``t``."""
        if s == t:
            return 0
        for j in range(1, self.depth + 1):
            if self.components[j][s] == self.components[j][t]:
                return j
        return None

    def parent_map(self, j: int) -> dict:
        """Tree edges from level ``j`` nodes to their level ``j + 1`` parents."""
        lo, hi = self.components[j], self.components[j + 1]
        return dict(zip(lo.tolist(), hi.tolist()))

    def is_laminar(self) -> bool:
        for j in range(self.depth):
            lo, hi = self.components[j], self.components[j + 1]
            pairs = np.unique(np.stack([lo, hi], axis=1), axis=0)
            if np.unique(pairs[:, 0]).size != pairs.shape[0]:
                return False
        return True

    def edge_copies(self) -> np.ndarray:
        """Number of query graphs each original edge appears in."""
        cnt = np.zeros(self.edge_level.size, dtype=np.int64)
        for qg in self.query_graphs:
            np.add.at(cnt, qg.edge_witness, 1)
        return cnt

    def total_size(self) -> tuple[int, int]:
        return (sum(q.graph.n for q in self.query_graphs), sum(q.graph.m for q in self.query_graphs))


class QueryMap(NamedTuple):
    status: str
    level: int
    graph: Optional[int]
    s: int
    t: int


def weight_decomposition(g: Graph, epsilon: float) -> WeightDecomposition:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    base = Fraction(max(g.n, 2)) / Fraction(epsilon)
    eb = bucket_edges(g, base, first_index=0) if g.m else None
    cats = sorted(eb.buckets) if eb else []
    # position of each edge's category among the non-empty ones, 1-based
    edge_level = np.zeros(g.m, dtype=np.int64)
    for j, c in enumerate(cats, start=1):
        edge_level[eb.buckets[c]] = j
    comps = [np.arange(g.n, dtype=np.int64)]
    for j in range(1, len(cats) + 1):
        comps.append(connected_components(g, np.nonzero(edge_level <= j)[0]))
    k = len(cats)
    qgs = []
    for j in range(1, k + 1):
        contract_lvl = max(j - 2, 0)
        keep = np.nonzero((edge_level <= min(j + 1, k)) & (edge_level > contract_lvl))[0]
        qg = quotient(g, comps[contract_lvl], keep)
        qgs.append(_trim(j, qg))
    return WeightDecomposition(g.n, float(epsilon), base, cats, edge_level, comps, qgs)


def _trim(level: int, qg: QuotientGraph) -> QueryGraph:
    """Drop quotient vertices without edges and relabel densely."""
    q = qg.graph
    deg = q.degree()
    live = np.nonzero(deg > 0)[0]
    new = np.full(q.n, -1, dtype=np.int64)
    new[live] = np.arange(live.size)
    tq = from_canonical(live.size, new[q.eu], new[q.ev], q.ew)
    vmap = new[qg.vertex_map]
    vmap.setflags(write=False)
    return QueryGraph(level, tq, vmap, qg.edge_witness)


def map_query(wd: WeightDecomposition, s: int, t: int) -> QueryMap:
    """Query graph and contracted endpoints that answer ``dist(s, t)``."""
    if not (0 <= s < wd.n and 0 <= t < wd.n):
        raise ValueError("vertex id out of range")
    if s == t:
        return QueryMap("same", 0, None, s, t)
    j = wd.lca_level(s, t)
    if j is None:
        return QueryMap("unreachable", -1, None, s, t)
    qg = wd.query_graphs[j - 1]
    return QueryMap("ok", j, j - 1, int(qg.vertex_map[s]), int(qg.vertex_map[t]))
