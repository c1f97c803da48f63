"""Iterated hopset construction for a small hop target ``n ** alpha``.

With ``eta = alpha / 2`` the construction runs ``ceil(1 / eta)`` rounds.
In every round and for every distance scale ``d`` (powers of ``n ** eta``)
the current working graph, minus edges heavier than ``d * n ** eta``, is
rounded with granularity ``eps * d * n ** (-2 eta)`` and a hopset is built
on it with ``delta = 2 / eta``, ``beta0 = eps / n ** (3 eta)`` and
``n_final = n ** (eta / 2)``. Each shortcut is re-weighted with its exact
distance, in original weights, inside its witness piece and merged into the
working graph before the next round.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from ..graph import Graph, _merge_min, from_canonical, induced_subgraph
from ..sssp import augment, hop_limited_search
from .build import HopsetParams, Schedule, hopset_build
from .rounding import exact_ceil_div


@dataclass
class LowDepthRound:
    index: int
    scales: int
    shortcuts_added: int
    working_edges: int
    max_depth: int


@dataclass(eq=False)
class LowDepthHopset:
    n: int
    alpha: float
    eta: float
    epsilon: float
    internal_epsilon: float
    su: np.ndarray
    sv: np.ndarray
    sw: np.ndarray
    round_of: np.ndarray
    rounds: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return int(self.su.size)

    @property
    def max_depth(self) -> int:
        return max((r.max_depth for r in self.rounds), default=0)

    @property
    def eps_total(self) -> float:
        """Per round: rounding slack plus ``16 * eps`` per recursion level."""
        per = self.epsilon + 16 * self.internal_epsilon * max(1, self.max_depth)
        return len(self.rounds) * per

    @property
    def hop_target(self) -> float:
        return float(self.n) ** self.alpha

    def edge_arrays(self, upto_round: Optional[int] = None):
        if upto_round is None:
            sel = slice(None)
        else:
            sel = self.round_of <= upto_round
        return self.su[sel], self.sv[sel], self.sw[sel]

    def working_graph(self, g: Graph, upto_round: Optional[int] = None) -> Graph:
        return augment(g, _Edges(*self.edge_arrays(upto_round)))


class _Edges:
    def __init__(self, u, v, w):
        self._a = (u, v, w)

    def edge_arrays(self):
        return self._a


def _scales(g: Graph, step: float) -> list[Fraction]:
    if g.m == 0:
        return []
    d = Fraction(float(g.ew.min()))
    top = Fraction(float(g.ew.max())) * g.n
    st = Fraction(step)
    out = []
    while d <= top:
        out.append(d)
        d *= st
    return out


def _true_weights(work: Graph, keep: np.ndarray, hs) -> np.ndarray:
    """Distance of each shortcut in the kept working edges inside its piece."""
    w = np.empty(hs.size)
    sub_all = from_canonical(work.n, work.eu[keep], work.ev[keep], work.ew[keep])
    for wid, piece in enumerate(hs.pieces):
        sel = np.nonzero(hs.witness == wid)[0]
        if sel.size == 0:
            continue
        sub = induced_subgraph(sub_all, piece)
        local = np.full(work.n, -1, dtype=np.int64)
        local[sub.vertices] = np.arange(sub.vertices.size)
        a = local[hs.su[sel].astype(np.int64)]
        b = local[hs.sv[sel].astype(np.int64)]
        srcs, inv = np.unique(a, return_inverse=True)
        dist = np.atleast_2d(sp_dijkstra(sub.graph.to_scipy(), directed=False, indices=srcs))
        w[sel] = dist[inv, b]
    return w


def low_depth_hopset(g: Graph, alpha: float, epsilon: float, seed: int = 0,
                     rounds: Optional[int] = None, k_conf: float = 2.0) -> LowDepthHopset:
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    n = max(g.n, 2)
    eta = alpha / 2
    n_rounds = math.ceil(1 / eta) if rounds is None else int(rounds)
    ln = math.log(n)
    eps_int = epsilon / ln
    delta = 2 / eta
    growth = k_conf / eps_int * ln
    sch = Schedule(n=n, eps=eps_int, growth=growth, rho=growth ** delta,
                   beta0=min(epsilon / n ** (3 * eta), 0.99), n_final=max(n ** (eta / 2), 2.0),
                   delta=delta, beta_cap=0.99)
    p = HopsetParams(epsilon=epsilon, delta=delta, k_conf=k_conf, internal_epsilon=eps_int)
    step = float(n) ** eta
    k_hops = Fraction(float(n) ** (2 * eta))
    zeta = Fraction(epsilon)
    acc_u = np.zeros(0, dtype=np.int64)
    acc_v = np.zeros(0, dtype=np.int64)
    acc_w = np.zeros(0)
    acc_r = np.zeros(0, dtype=np.int64)
    work = g
    records = []
    for r in range(n_rounds):
        new_u, new_v, new_w = [], [], []
        depth = 0
        scales = _scales(work, step)
        for t, d in enumerate(scales):
            # granularity eps * d / n^(2 eta), written as zeta * d / k with fractional k
            gr = zeta * d / k_hops
            keep = np.nonzero(work.ew <= float(d) * step)[0]
            wt = exact_ceil_div(work.ew[keep], gr)
            rg = from_canonical(work.n, work.eu[keep], work.ev[keep], wt)
            ss = np.random.SeedSequence([int(seed) & (2 ** 64 - 1), r, t])
            hs = hopset_build(rg, p, seed=int(ss.generate_state(1, np.uint64)[0]), schedule=sch)
            depth = max(depth, hs.depth)
            if hs.size == 0:
                continue
            tw = _true_weights(work, keep, hs)
            ok = np.isfinite(tw)
            new_u.append(hs.su[ok].astype(np.int64))
            new_v.append(hs.sv[ok].astype(np.int64))
            new_w.append(tw[ok])
        added = 0
        if new_u:
            u = np.concatenate(new_u)
            v = np.concatenate(new_v)
            w = np.concatenate(new_w)
            a, b, w, _ = _merge_min(g.n, u, v, w)
            added = int(a.size)
            acc_u = np.concatenate([acc_u, a])
            acc_v = np.concatenate([acc_v, b])
            acc_w = np.concatenate([acc_w, w])
            acc_r = np.concatenate([acc_r, np.full(a.size, r, dtype=np.int64)])
            work = augment(work, _Edges(a, b, w))
        records.append(LowDepthRound(r, len(scales), added, work.m, depth))
    return LowDepthHopset(g.n, float(alpha), float(eta), float(epsilon), eps_int,
                          acc_u, acc_v, acc_w, acc_r, records)


def hops_needed(work: Graph, pairs, exact: np.ndarray, factor: float, h_max: int) -> np.ndarray:
    """Fewest hops giving distance ``<= factor * exact`` per pair (-1 if none)."""
    out = np.full(len(pairs), -1, dtype=np.int64)
    for i, (s, t) in enumerate(pairs):
        hs = hop_limited_search(work, int(s), h_max, int(t))
        k = hs.hops_to_reach(factor * exact[i])
        if k is not None:
            out[i] = k
    return out
