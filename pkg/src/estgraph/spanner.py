"""Sparse spanners from exponential start time clusterings.

An unweighted graph is clustered once; the spanner keeps every cluster tree
plus, for each boundary vertex, one edge into every neighbouring cluster.

Weighted graphs are split into power-of-two weight buckets. Buckets whose
indices are congruent modulo ``s = ceil(c_spacing * lg k)`` form one group,
so consecutive buckets in a group differ in weight by at least
``k ** c_spacing``. Each group is processed light to heavy: bucket ``i`` is
clustered on the quotient of its edges by the forests of the earlier
buckets, treated as unit weight.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .cluster import ClusterParams, cluster_diagnostics, est_cluster
from .graph import Graph, bucket_edges, connected_components, edge_subgraph, quotient
from .sssp import dijkstra

FOREST = "forest"
INTER = "inter"


@dataclass(frozen=True)
class SpannerParams:
    k: int
    c_spacing: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.c_spacing < 1:
            raise ValueError("c_spacing must be >= 1")

    def beta(self, n: int) -> float:
        return min(math.log(max(n, 2)) / (2 * self.k), 0.99)

    @property
    def groups(self) -> int:
        return max(1, math.ceil(self.c_spacing * math.log2(self.k)))

    @property
    def separation(self) -> float:
        return float(self.k) ** self.c_spacing


@dataclass
class LevelRecord:
    """Per-bucket summary.

    ``max_diameter`` is the largest cluster tree diameter in hops of the
    quotient, ``max_weight`` the heaviest bucket edge, ``component_diameter``
    a bound on the weighted diameter of every forest component after this
    level and ``edge_bound`` a bound on ``dist_H(u, v)`` for every bucket edge.
    """

    group: int
    bucket: int
    quotient_n: int
    quotient_m: int
    beta: float
    max_diameter: float
    max_weight: float
    component_diameter: float
    edge_bound: float
    forest_edges: int
    inter_edges: int
    clusters: int


@dataclass(eq=False)
class Spanner:
    n: int
    m: int
    edge_ids: np.ndarray
    kind: dict
    group: dict
    bucket: dict
    levels: list = field(default_factory=list)
    certified: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return int(self.edge_ids.size)

    def graph(self, g: Graph) -> Graph:
        return edge_subgraph(g, self.edge_ids).graph

    def bound_for(self, g: Graph, e: int) -> float:
        """Certified upper bound on ``dist_H`` across original edge ``e``."""
        return self.certified[int(e)]

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "n": self.n,
            "m": self.m,
            "edges": [
                {"id": int(e), "kind": self.kind[e], "group": self.group[e], "bucket": self.bucket[e]}
                for e in self.edge_ids.tolist()
            ],
            "levels": [asdict(lv) for lv in self.levels],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"# spanner n={self.n} m={self.m} size={self.size}", "# id kind group bucket"]
        for e in self.edge_ids.tolist():
            lines.append(f"{e} {self.kind[e]} {self.group[e]} {self.bucket[e]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Spanner":
        ids = np.array(sorted(r["id"] for r in d["edges"]), dtype=np.int64)
        kind = {r["id"]: r["kind"] for r in d["edges"]}
        group = {r["id"]: r["group"] for r in d["edges"]}
        bucket = {r["id"]: r["bucket"] for r in d["edges"]}
        levels = [LevelRecord(**lv) for lv in d.get("levels", [])]
        return cls(d["n"], d["m"], ids, kind, group, bucket, levels)


def level_seed(seed: int, group: int, bucket: int) -> int:
    ss = np.random.SeedSequence([int(seed) & (2 ** 64 - 1), group, bucket + 2 ** 20])
    return int(ss.generate_state(1, np.uint64)[0])


def _boundary_edges(q: Graph, center: np.ndarray) -> np.ndarray:
    """One quotient edge per (boundary vertex, adjacent cluster) pair, min id."""
    cut = np.nonzero(center[q.eu] != center[q.ev])[0]
    if cut.size == 0:
        return cut.astype(np.int64)
    vert = np.concatenate([q.eu[cut], q.ev[cut]])
    other = np.concatenate([center[q.ev[cut]], center[q.eu[cut]]])
    eid = np.concatenate([cut, cut])
    order = np.lexsort((eid, other, vert))
    vert, other, eid = vert[order], other[order], eid[order]
    first = np.ones(vert.size, dtype=bool)
    first[1:] = (vert[1:] != vert[:-1]) | (other[1:] != other[:-1])
    return np.unique(eid[first])


def _nominal_floor(w: float) -> float:
    return 2.0 ** math.floor(math.log2(w))


def well_separated_spanner(g: Graph, buckets, p: SpannerParams, group: int = 0,
                           bucket_ids=None, trace: Optional[list] = None) -> Spanner:
    """Spanner of the edges in ``buckets`` (light to heavy).

    Every bucket must sit inside one power-of-two range and consecutive
    buckets must be at least ``k ** c_spacing`` apart. ``bucket_ids`` names
    the buckets in the provenance (default ``1, 2, ...``). When ``trace`` is
    a list, ``(labels, quotient, clustering)`` is appended for each level.
    """
    buckets = [np.asarray(b, dtype=np.int64) for b in buckets]
    if bucket_ids is None:
        bucket_ids = list(range(1, len(buckets) + 1))
    floors = []
    for b in buckets:
        if b.size == 0:
            floors.append(None)
            continue
        lo = _nominal_floor(float(g.ew[b].min()))
        if float(g.ew[b].max()) >= 2 * lo:
            raise ValueError("buckets not well separated")
        floors.append(lo)
    live = [f for f in floors if f is not None]
    for a, b in zip(live, live[1:]):
        if b / a < p.separation * (1 - 1e-12):
            raise ValueError("buckets not well separated")

    beta = p.beta(g.n)
    labels = np.arange(g.n, dtype=np.int64)
    forest: list[np.ndarray] = []
    kind: dict = {}
    grp: dict = {}
    bkt: dict = {}
    certified: dict = {}
    levels: list[LevelRecord] = []
    comp_diam = 0.0
    for b, lo, bid in zip(buckets, floors, bucket_ids):
        if lo is None:
            continue
        qg = quotient(g, labels, b)
        q = qg.graph.unit()
        c = est_cluster(q, ClusterParams(beta=beta, seed=level_seed(p.seed, group, bid)))
        stats = cluster_diagnostics(q, c)
        f_ids = qg.edge_witness[c.forest_edges()]
        i_ids = qg.edge_witness[_boundary_edges(q, c.center)]
        for e in f_ids.tolist():
            kind[e] = FOREST
        for e in i_ids.tolist():
            kind[e] = INTER
        for e in np.concatenate([f_ids, i_ids]).tolist():
            grp[e] = group
            bkt[e] = bid
        if trace is not None:
            trace.append((labels.copy(), qg, c))
        dmax = stats.max_diameter
        wmax = float(g.ew[b].max())
        bound = (2 * dmax + 1) * wmax + (2 * dmax + 2) * comp_diam
        for e in b.tolist():
            certified[e] = bound
        new_diam = max(comp_diam, dmax * wmax + (dmax + 1) * comp_diam)
        levels.append(LevelRecord(
            group=group, bucket=int(bid), quotient_n=q.n, quotient_m=q.m, beta=beta,
            max_diameter=dmax, max_weight=wmax, component_diameter=new_diam,
            edge_bound=bound, forest_edges=int(f_ids.size), inter_edges=int(i_ids.size),
            clusters=stats.num_clusters,
        ))
        comp_diam = new_diam
        forest.append(f_ids)
        labels = connected_components(g, np.concatenate(forest))
    ids = np.array(sorted(kind), dtype=np.int64)
    return Spanner(g.n, g.m, ids, kind, grp, bkt, levels, certified)


def unweighted_spanner(g: Graph, p: SpannerParams) -> Spanner:
    """Cluster forest plus one edge per (boundary vertex, adjacent cluster)."""
    if not g.is_unweighted:
        raise ValueError("use weighted_spanner")
    return well_separated_spanner(g, [np.arange(g.m, dtype=np.int64)], p)


def split_groups(g: Graph, p: SpannerParams) -> list[list[tuple[int, np.ndarray]]]:
    """Power-of-two buckets dealt into ``p.groups`` well separated groups."""
    eb = bucket_edges(g, 2, first_index=1)
    s = p.groups
    out: list[list] = [[] for _ in range(s)]
    for i in sorted(eb.buckets):
        out[(i - 1) % s].append((i, eb.buckets[i]))
    return out


def weighted_spanner(g: Graph, p: SpannerParams) -> Spanner:
    """Union of well separated spanners over the bucket groups."""
    kind: dict = {}
    grp: dict = {}
    bkt: dict = {}
    certified: dict = {}
    levels: list = []
    for j, grp_buckets in enumerate(split_groups(g, p)):
        if not grp_buckets:
            continue
        sp = well_separated_spanner(g, [b for _, b in grp_buckets], p, group=j,
                                    bucket_ids=[i for i, _ in grp_buckets])
        kind.update(sp.kind)
        grp.update(sp.group)
        bkt.update(sp.bucket)
        certified.update(sp.certified)
        levels.extend(sp.levels)
    ids = np.array(sorted(kind), dtype=np.int64)
    return Spanner(g.n, g.m, ids, kind, grp, bkt, levels, certified)


def build_spanner(g: Graph, p: SpannerParams) -> Spanner:
    return unweighted_spanner(g, p) if g.is_unweighted else weighted_spanner(g, p)


def edge_distances_in(h: Graph, g: Graph, edge_ids=None, limit: float = np.inf) -> np.ndarray:
    """``dist_h(u, v)`` for the selected edges ``(u, v)`` of ``g``.

    Sources are grouped so each distinct endpoint runs one search. Values
    beyond ``limit`` come back as ``inf``.
    """
    if edge_ids is None:
        edge_ids = np.arange(g.m, dtype=np.int64)
    edge_ids = np.asarray(edge_ids, dtype=np.int64)
    out = np.empty(edge_ids.size)
    if edge_ids.size == 0:
        return out
    us = g.eu[edge_ids]
    src = np.unique(us)
    mat = h.to_scipy()
    from scipy.sparse.csgraph import dijkstra as sp_dijkstra

    chunk = max(1, int(2e7 // max(h.n, 1)))
    row = {}
    for a in range(0, src.size, chunk):
        part = src[a:a + chunk]
        d = sp_dijkstra(mat, directed=False, indices=part, limit=limit)
        d = np.atleast_2d(d)
        sel = np.isin(us, part)
        pos = np.searchsorted(part, us[sel])
        out[sel] = d[pos, g.ev[edge_ids[sel]]]
    return out


def edge_stretch(g: Graph, sp: Spanner, edge_ids=None, limit: float = np.inf) -> np.ndarray:
    """Stretch ``dist_H(u, v) / w(u, v)`` of the chosen edges."""
    if edge_ids is None:
        edge_ids = np.arange(g.m, dtype=np.int64)
    edge_ids = np.asarray(edge_ids, dtype=np.int64)
    d = edge_distances_in(sp.graph(g), g, edge_ids, limit)
    return d / g.ew[edge_ids]


def forest_is_acyclic(g: Graph, sp: Spanner) -> bool:
    """Forest-tagged edges of each group contain no cycle."""
    by_group: dict = {}
    for e, k in sp.kind.items():
        if k == FOREST:
            by_group.setdefault(sp.group[e], []).append(e)
    for ids in by_group.values():
        lab = connected_components(g, ids)
        comps = int(lab.max()) + 1 if lab.size else 0
        if len(ids) != g.n - comps:
            return False
    return True


def same_components(g: Graph, sp: Spanner) -> bool:
    a = connected_components(g)
    b = connected_components(g, sp.edge_ids)
    return bool(np.array_equal(a, b))
