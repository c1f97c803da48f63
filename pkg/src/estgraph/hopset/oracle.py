"""Approximate distance oracle built from rounded per-scale hopsets.

Preprocessing splits the graph into query graphs of bounded weight ratio
(``weight_decomposition`` with ``eps / 2``). For each query graph and every
distance scale ``d`` (powers of ``n ** eta`` starting at the lightest
edge), weights are rounded with granularity ``(eps / 2) * d / (n_Q - 1)``
after dropping edges heavier than ``d * n ** eta``, and ``repetitions``
independent hopsets are built on the rounded graph.

A query runs a hop-limited search on every bundle of its query graph and
keeps the smallest rescaled answer.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from ..graph import Graph
from ..sssp import UNREACHABLE, augment, dijkstra, hop_limited_search
from .build import Hopset, HopsetParams, LevelStats, Schedule, hopset_build
from .decomposition import QueryGraph, WeightDecomposition, map_query, weight_decomposition
from .rounding import round_weights

FORMAT_VERSION = 1


@dataclass(eq=False)
class Bundle:
    graph_index: int
    scale_index: int
    repetition: int
    d: Fraction
    zeta: Fraction
    k_hops: int
    max_weight: float
    predicted_h: int
    hop_budget: int
    hopset: Hopset
    _aug: Optional[Graph] = field(default=None, repr=False)

    @property
    def granularity(self) -> Fraction:
        return self.zeta * self.d / self.k_hops

    def rounded(self, qg: QueryGraph):
        return round_weights(qg.graph, self.d, self.k_hops, self.zeta, self.max_weight)

    def augmented(self, qg: QueryGraph, cache: bool = False) -> Graph:
        if self._aug is not None:
            return self._aug
        aug = augment(self.rounded(qg).graph, self.hopset)
        if cache:
            self._aug = aug
        return aug


@dataclass(eq=False)
class OracleIndex:
    n: int
    epsilon: float
    eta: float
    params: HopsetParams
    decomposition: WeightDecomposition
    bundles: list
    fingerprint: str = ""

    @property
    def zeta(self) -> float:
        return self.epsilon / 2

    def bundles_for(self, graph_index: int) -> list:
        return [b for b in self.bundles if b.graph_index == graph_index]

    def shortcut_count(self) -> int:
        return sum(b.hopset.size for b in self.bundles)

    def to_dict(self) -> dict:
        return _index_to_dict(self)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True))

    @classmethod
    def load(cls, path, g: Graph) -> "OracleIndex":
        return index_from_dict(json.loads(Path(path).read_text()), g)


@dataclass
class QueryResult:
    value: object
    level: int
    scale: Optional[float] = None
    hops: Optional[int] = None
    bundle: Optional[int] = None
    fallback: bool = False


def distance_scales(qg: QueryGraph, n: int, eta: float) -> list[Fraction]:
    """Scales ``w_min * (n ** eta) ** t`` up to ``n_Q * w_max``."""
    if qg.graph.m == 0:
        return []
    w_min = Fraction(float(qg.graph.ew.min()))
    top = Fraction(float(qg.graph.ew.max())) * qg.n
    step = Fraction(float(n) ** eta)
    out = []
    d = w_min
    while d <= top:
        out.append(d)
        d = d * step
    return out


def rep_seed(seed: int, j: int, t: int, r: int) -> int:
    ss = np.random.SeedSequence([int(seed) & (2 ** 64 - 1), j, t, r])
    return int(ss.generate_state(1, np.uint64)[0])


def build_oracle(g: Graph, epsilon: float, eta: float = 0.5, p: Optional[HopsetParams] = None) -> OracleIndex:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if p is None:
        p = HopsetParams(epsilon=epsilon, weighted=True)
    wd = weight_decomposition(g, epsilon / 2)
    zeta = Fraction(epsilon) / 2
    c = float(g.n) ** eta
    bundles = []
    for j, qg in enumerate(wd.query_graphs):
        k_hops = max(qg.n - 1, 1)
        for t, d in enumerate(distance_scales(qg, g.n, eta)):
            cap = float(d) * c
            rg = round_weights(qg.graph, d, k_hops, zeta, cap)
            sch = p.resolve(qg.n)
            pred = math.ceil(4 * sch.hop_factor() * float(d) * c / float(rg.granularity))
            budget = max(1, min(pred, k_hops))
            for r in range(p.repetitions):
                hs = hopset_build(rg.graph, p, seed=rep_seed(p.seed, j, t, r), schedule=sch)
                bundles.append(Bundle(j, t, r, d, zeta, k_hops, cap, pred, budget, hs))
    return OracleIndex(g.n, float(epsilon), float(eta), p, wd, bundles, g.fingerprint())


def query_oracle(o: OracleIndex, s: int, t: int) -> QueryResult:
    """Approximate ``dist(s, t)`` with metadata on the winning bundle."""
    return query_many(o, [(s, t)])[0]


def query_many(o: OracleIndex, pairs, cache: bool = False, repetitions=None) -> list:
    """Answer several queries, building each augmented bundle graph once.

    ``repetitions`` restricts the search to bundles with those repetition
    indices.
    """
    pairs = [(int(s), int(t)) for s, t in pairs]
    out: list = [None] * len(pairs)
    todo: dict[int, list] = {}
    maps = []
    for i, (s, t) in enumerate(pairs):
        qm = map_query(o.decomposition, s, t)
        maps.append(qm)
        if qm.status == "same":
            out[i] = QueryResult(0.0, 0)
        elif qm.status == "unreachable":
            out[i] = QueryResult(UNREACHABLE, -1)
        else:
            out[i] = QueryResult(UNREACHABLE, qm.level)
            todo.setdefault(qm.graph, []).append(i)
    for gi, idx in todo.items():
        qg = o.decomposition.query_graphs[gi]
        for bi, b in enumerate(o.bundles):
            if b.graph_index != gi:
                continue
            if repetitions is not None and b.repetition not in repetitions:
                continue
            aug = b.augmented(qg, cache)
            for i in idx:
                qm = maps[i]
                hs = hop_limited_search(aug, qm.s, b.hop_budget, qm.t)
                val = hs.dist[qm.t]
                if not math.isfinite(val):
                    continue
                val = float(b.granularity * int(val))
                cur = out[i].value
                if cur is UNREACHABLE or val < cur:
                    out[i] = QueryResult(val, qm.level, float(b.d), hs.hops_to_reach(hs.dist[qm.t]), bi)
            del aug
        for i in idx:
            if out[i].value is UNREACHABLE:
                # no bundle reached t within its budget: answer on the query graph exactly
                qm = maps[i]
                d = dijkstra(qg.graph, qm.s).dist[qm.t]
                out[i] = QueryResult(UNREACHABLE if d == math.inf else float(d), qm.level, fallback=True)
    return out


def _hopset_to_dict(h: Hopset) -> dict:
    return {
        "n": h.n,
        "su": h.su.tolist(),
        "sv": h.sv.tolist(),
        "sw": h.sw.tolist(),
        "kind": h.kind.tolist(),
        "level": h.level.tolist(),
        "witness": h.witness.tolist(),
        "pieces": [pc.tolist() for pc in h.pieces],
        "schedule": asdict(h.schedule),
        "levels": [asdict(s) for s in h.levels],
    }


def _hopset_from_dict(d: dict) -> Hopset:
    def arr(x, dt):
        return np.asarray(x, dtype=dt)

    return Hopset(
        n=d["n"], su=arr(d["su"], np.int32), sv=arr(d["sv"], np.int32), sw=arr(d["sw"], np.float64),
        kind=arr(d["kind"], np.int8), level=arr(d["level"], np.int16),
        witness=arr(d["witness"], np.int32), pieces=[arr(pc, np.int64) for pc in d["pieces"]], schedule=Schedule(**d["schedule"]),
        levels=[LevelStats(**s) for s in d["levels"]],
    )


def _index_to_dict(o: OracleIndex) -> dict:
    return {
        "format": "estgraph-oracle",
        "version": FORMAT_VERSION,
        "n": o.n,
        "epsilon": o.epsilon,
        "eta": o.eta,
        "fingerprint": o.fingerprint,
        "params": asdict(o.params),
        "bundles": [
            {
                "graph_index": b.graph_index,
                "scale_index": b.scale_index,
                "repetition": b.repetition,
                "d": [b.d.numerator, b.d.denominator],
                "zeta": [b.zeta.numerator, b.zeta.denominator],
                "k_hops": b.k_hops,
                "max_weight": b.max_weight,
                "predicted_h": b.predicted_h,
                "hop_budget": b.hop_budget,
                "hopset": _hopset_to_dict(b.hopset),
            }
            for b in o.bundles
        ],
    }


def index_from_dict(d: dict, g: Graph) -> OracleIndex:
    """Rebuild an index for ``g``; the decomposition is recomputed."""
    if d.get("format") != "estgraph-oracle" or d.get("version") != FORMAT_VERSION:
        raise ValueError("not an oracle index of a supported version")
    if d["fingerprint"] and d["fingerprint"] != g.fingerprint():
        raise ValueError("index was built for a different graph")
    p = HopsetParams(**d["params"])
    wd = weight_decomposition(g, d["epsilon"] / 2)
    bundles = []
    for r in d["bundles"]:
        bundles.append(Bundle(r["graph_index"], r["scale_index"], r["repetition"], Fraction(*r["d"]),
                              Fraction(*r["zeta"]), r["k_hops"], r["max_weight"], r["predicted_h"],
                              r["hop_budget"], _hopset_from_dict(r["hopset"])))
    return OracleIndex(d["n"], d["epsilon"], d["eta"], p, wd, bundles, d["fingerprint"])
