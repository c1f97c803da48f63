"""Recursive hopset construction from exponential start time clusterings.

The top call clusters with ``beta0`` and recurses on every cluster. Each
deeper call clusters its piece with an escalated ``beta``; clusters holding
at least ``|piece| / rho`` vertices are large and get star edges (member to
center) plus a clique on their centers, the rest are recursed on. Pieces of
at most ``n_final`` vertices stop the recursion.

Shortcut weights are exact distances inside the piece that was clustered,
which is recorded as the shortcut's witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import _kernels
from ..cluster import ClusterParams, est_cluster
from ..graph import Graph, induced_subgraph

STAR = 0
CLIQUE = 1
KIND_NAMES = {STAR: "star", CLIQUE: "clique"}


@dataclass(frozen=True)
class HopsetParams:
    epsilon: float = 0.5
    delta: float = 1.5
    gamma1: float = 0.3
    gamma2: float = 0.6
    k_conf: float = 2.0
    repetitions: int = 3
    seed: int = 0
    n_final: Optional[float] = None
    beta0: Optional[float] = None
    weighted: bool = False
    beta_cap: float = 0.99
    internal_epsilon: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.delta <= 1:
            raise ValueError("delta must exceed 1")
        if not 0 < self.gamma1 < self.gamma2 < 1:
            raise ValueError("need 0 < gamma1 < gamma2 < 1")
        if self.k_conf <= 0:
            raise ValueError("k_conf must be positive")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.beta0 is not None and not 0 < self.beta0 < 1:
            raise ValueError("beta0 must lie in (0, 1)")
        if not 0 < self.beta_cap < 1:
            raise ValueError("beta_cap must lie in (0, 1)")

    def resolve(self, n: int) -> "Schedule":
        n = max(int(n), 2)
        ln = math.log(n)
        eps = self.internal_epsilon if self.internal_epsilon is not None else self.epsilon / ln
        growth = self.k_conf / eps * ln
        rho = growth ** self.delta
        if self.beta0 is not None:
            beta0 = self.beta0
        elif self.weighted:
            beta0 = (n / eps) ** (-self.gamma2)
        else:
            beta0 = float(n) ** (-self.gamma2)
        n_final = self.n_final if self.n_final is not None else float(n) ** self.gamma1
        if n_final < 2:
            n_final = 2.0
        if rho <= 1:
            raise ValueError("rho must exceed 1")
        return Schedule(n=n, eps=eps, growth=growth, rho=rho, beta0=min(beta0, self.beta_cap),
                        n_final=float(n_final), delta=self.delta, beta_cap=self.beta_cap)


@dataclass(frozen=True)
class Schedule:
    """Numbers derived from ``HopsetParams`` for a graph of ``n`` vertices."""

    n: int
    eps: float
    growth: float
    rho: float
    beta0: float
    n_final: float
    delta: float
    beta_cap: float

    def beta(self, level: int) -> float:
        """Scheduled rate at recursion depth ``level`` (uncapped)."""
        return self.beta0 * self.growth ** level

    def beta_used(self, level: int) -> float:
        return min(self.beta(level), self.beta_cap)

    def hop_factor(self) -> float:
        return self.n ** (1 / self.delta) * self.n_final ** (1 - 1 / self.delta) * self.beta0

    def predicted_h(self, d: float) -> int:
        """Hop budget for pairs at distance ``d``, four times the expectation."""
        return max(1, math.ceil(4 * self.hop_factor() * d))

    def clique_bound(self) -> float:
        return self.n / self.n_final * self.rho ** 2


@dataclass
class LevelStats:
    level: int
    beta: float
    beta_used: float
    pieces: int = 0
    clusters: int = 0
    large: int = 0
    stars: int = 0
    cliques: int = 0


@dataclass(eq=False)
class Hopset:
    n: int
    su: np.ndarray
    sv: np.ndarray
    sw: np.ndarray
    kind: np.ndarray
    level: np.ndarray
    witness: np.ndarray
    pieces: list = field(repr=False)
    schedule: Schedule = None
    levels: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return int(self.su.size)

    @property
    def star_count(self) -> int:
        return int((self.kind == STAR).sum())

    @property
    def clique_count(self) -> int:
        return int((self.kind == CLIQUE).sum())

    @property
    def depth(self) -> int:
        """Deepest recursion level at which a piece was clustered."""
        lv = [s.level for s in self.levels if s.pieces]
        return max(lv) if lv else 0

    @property
    def eps_total(self) -> float:
        """Distortion allowance: ``16 * eps`` per recursion level below the top."""
        return 16 * self.schedule.eps * max(1, self.depth)

    def predicted_h(self, d: float) -> int:
        return self.schedule.predicted_h(d)

    def edge_arrays(self):
        return self.su.astype(np.int64), self.sv.astype(np.int64), self.sw

    def shortcuts(self):
        for i in range(self.size):
            yield (int(self.su[i]), int(self.sv[i]), float(self.sw[i]),
                   KIND_NAMES[int(self.kind[i])], int(self.level[i]), int(self.witness[i]))

    def witness_vertices(self, i: int) -> np.ndarray:
        return self.pieces[int(self.witness[i])]

    @classmethod
    def empty(cls, n: int, schedule: Schedule) -> "Hopset":
        z = np.zeros(0, dtype=np.int64)
        return cls(n, z, z.copy(), np.zeros(0), z.copy(), z.copy(), z.copy(), [], schedule, [])


def piece_seed(seed: int, counter: int) -> int:
    ss = np.random.SeedSequence([int(seed) & (2 ** 64 - 1), counter])
    return int(ss.generate_state(1, np.uint64)[0])


def hopset_build(g: Graph, p: HopsetParams, seed: Optional[int] = None,
                 schedule: Optional[Schedule] = None) -> Hopset:
    """Build a hopset for ``g`` (integer weights >= 1).

    ``seed`` overrides ``p.seed``; ``schedule`` overrides the parameters
    derived from ``p`` and ``g.n``.
    """
    if not g.is_integral:
        raise ValueError("hopset_build needs integer weights; round first")
    sch = schedule if schedule is not None else p.resolve(g.n)
    seed = p.seed if seed is None else seed
    stats: dict[int, LevelStats] = {}

    def st(level):
        if level not in stats:
            stats[level] = LevelStats(level, sch.beta(level), sch.beta_used(level))
        return stats[level]

    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    ws: list[np.ndarray] = []
    ks: list[np.ndarray] = []
    lvs: list[np.ndarray] = []
    wits: list[np.ndarray] = []
    pieces: list[np.ndarray] = []
    counter = 0
    # breadth-first over (level, piece graph, original ids)
    queue = [(0, g, np.arange(g.n, dtype=np.int64))]
    head = 0
    while head < len(queue):
        level, pg, ids = queue[head]
        queue[head] = None
        head += 1
        if pg.n <= sch.n_final:
            continue
        s = st(level)
        s.pieces += 1
        counter += 1
        c = est_cluster(pg, ClusterParams(beta=sch.beta_used(level), seed=piece_seed(seed, counter)))
        members = c.members()
        centers = np.unique(c.center)
        s.clusters += len(members)
        if level == 0:
            small = members
        else:
            thresh = pg.n / sch.rho
            sizes = np.array([m.size for m in members])
            big = sizes >= thresh
            small = [m for m, b in zip(members, big) if not b]
            big_centers = centers[big]
            s.large += int(big.sum())
            if big_centers.size:
                wid = len(pieces)
                pieces.append(ids)
                in_big = np.isin(c.center, big_centers)
                star_v = np.nonzero(in_big & (c.center != np.arange(pg.n)))[0]
                depth = c.tree_depth(pg)
                if star_v.size:
                    us.append(ids[star_v])
                    vs.append(ids[c.center[star_v]])
                    ws.append(depth[star_v])
                    ks.append(np.full(star_v.size, STAR, dtype=np.int64))
                    lvs.append(np.full(star_v.size, level, dtype=np.int64))
                    wits.append(np.full(star_v.size, wid, dtype=np.int64))
                    s.stars += int(star_v.size)
                if big_centers.size > 1:
                    dm = _kernels.center_distances(pg.indptr, pg.adj, pg.adj_w, big_centers)
                    iu, ju = np.triu_indices(big_centers.size, 1)
                    dd = dm[iu, ju]
                    ok = np.isfinite(dd)
                    iu, ju, dd = iu[ok], ju[ok], dd[ok]
                    us.append(ids[big_centers[iu]])
                    vs.append(ids[big_centers[ju]])
                    ws.append(dd)
                    ks.append(np.full(dd.size, CLIQUE, dtype=np.int64))
                    lvs.append(np.full(dd.size, level, dtype=np.int64))
                    wits.append(np.full(dd.size, wid, dtype=np.int64))
                    s.cliques += int(dd.size)
        for m in small:
            if m.size <= sch.n_final:
                continue
            sub = induced_subgraph(pg, m)
            queue.append((level + 1, sub.graph, ids[sub.vertices]))

    def cat(parts, dtype):
        return np.concatenate(parts).astype(dtype) if parts else np.zeros(0, dtype=dtype)

    su, sv = cat(us, np.int64), cat(vs, np.int64)
    lo, hi = np.minimum(su, sv), np.maximum(su, sv)
    # compact storage: clique edges can number in the millions
    return Hopset(
        n=g.n, su=lo.astype(np.int32), sv=hi.astype(np.int32), sw=cat(ws, np.float64),
        kind=cat(ks, np.int8), level=cat(lvs, np.int16), witness=cat(wits, np.int32), pieces=pieces,
        schedule=sch, levels=[stats[k] for k in sorted(stats)],
    )


def witness_mismatches(g: Graph, h: Hopset) -> int:
    """Shortcuts whose weight differs from the distance inside their witness."""
    from scipy.sparse.csgraph import dijkstra as sp_dijkstra

    bad = 0
    for wid, piece in enumerate(h.pieces):
        sel = np.nonzero(h.witness == wid)[0]
        if sel.size == 0:
            continue
        sub = induced_subgraph(g, piece)
        local = np.full(g.n, -1, dtype=np.int64)
        local[sub.vertices] = np.arange(sub.vertices.size)
        a = local[h.su[sel].astype(np.int64)]
        b = local[h.sv[sel].astype(np.int64)]
        if (a < 0).any() or (b < 0).any():
            bad += int(((a < 0) | (b < 0)).sum())
            continue
        srcs, inv = np.unique(a, return_inverse=True)
        dist = np.atleast_2d(sp_dijkstra(sub.graph.to_scipy(), directed=False, indices=srcs))
        bad += int((dist[inv, b] != h.sw[sel]).sum())
    return bad
