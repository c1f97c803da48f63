"""Rounding weights up to multiples of a granularity ``zeta * d / k``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..graph import Graph, from_canonical


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, eq=False)
class RoundedGraph:
    graph: Graph
    granularity: Fraction
    original: Graph
    edge_ids: np.ndarray
    d: Fraction
    k_hops: int
    zeta: Fraction

    @property
    def w_hat(self) -> float:
        return float(self.granularity)


def exact_ceil_div(w: np.ndarray, g: Fraction) -> np.ndarray:
    """``ceil(w / g)`` for float64 ``w``, exact in rational arithmetic."""
    q = w / float(g)
    out = np.ceil(q)
    # the float quotient can land on the wrong side of an integer; redo those exactly
    near = np.abs(q - np.round(q)) <= 1e-7 * np.maximum(1.0, np.abs(q))
    for i in np.nonzero(near)[0].tolist():
        out[i] = math.ceil(Fraction(float(w[i])) / g)
    return out


def granularity(d, k_hops: int, zeta) -> Fraction:
    return _frac(zeta) * _frac(d) / int(k_hops)


def round_weights(g: Graph, d, k_hops: int, zeta, max_weight=None) -> RoundedGraph:
    """Integer weights ``ceil(w(e) / w_hat)`` with ``w_hat = zeta * d / k_hops``.

    With ``max_weight`` edges heavier than it are dropped; ``edge_ids`` maps
    the rounded graph's edges back to ``g``.
    """
    d, zeta = _frac(d), _frac(zeta)
    if d <= 0:
        raise ValueError("d must be positive")
    if k_hops < 1:
        raise ValueError("k_hops must be >= 1")
    if not 0 < zeta < 1:
        raise ValueError("zeta must lie in (0, 1)")
    gr = granularity(d, k_hops, zeta)
    if max_weight is None:
        ids = np.arange(g.m, dtype=np.int64)
    else:
        ids = np.nonzero(g.ew <= float(max_weight))[0].astype(np.int64)
    wt = exact_ceil_div(g.ew[ids], gr)
    wt = np.maximum(wt, 1.0)
    rg = from_canonical(g.n, g.eu[ids], g.ev[ids], wt)
    return RoundedGraph(rg, gr, g, ids, d, int(k_hops), zeta)


@dataclass
class PathRounding:
    weight: Fraction
    rounded: int
    hops: int
    hop_bound: int
    scaled_back: Fraction

    def within_hop_bound(self) -> bool:
        return self.rounded <= self.hop_bound

    def within_distortion(self, zeta) -> bool:
        return self.scaled_back <= (1 + _frac(zeta)) * self.weight


def path_rounding(rg: RoundedGraph, path_edges, c) -> PathRounding:
    """Exact rounding statistics of a path given by original edge ids.

    ``hop_bound`` is ``ceil(c * k / zeta)``; a path of ``d <= w(p) <= c d``
    with at most ``k`` edges stays within it whenever its edges are not
    far below the granularity.
    """
    g = rg.original
    path_edges = [int(e) for e in path_edges]
    pos = np.full(g.m, -1, dtype=np.int64)
    pos[rg.edge_ids] = np.arange(rg.edge_ids.size)
    w = Fraction(0)
    r = 0
    for e in path_edges:
        w += Fraction(float(g.ew[e]))
        if pos[e] < 0:
            raise ValueError(f"edge {e} was dropped by the rounding")
        r += int(rg.graph.ew[pos[e]])
    bound = math.ceil(_frac(c) * rg.k_hops / rg.zeta)
    return PathRounding(w, r, len(path_edges), bound, rg.granularity * r)
