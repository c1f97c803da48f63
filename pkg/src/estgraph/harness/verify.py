"""Cross-check a built artifact against exact shortest path oracles."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..graph import Graph
from ..hopset.build import Hopset
from ..hopset.oracle import OracleIndex, query_many
from ..spanner import Spanner, edge_distances_in
from ..sssp import augment, hop_limited_search
from .experiments import _exact_distances, sample_pairs
from .stats import summary


class ArtifactMismatch(ValueError):
    """The artifact was not built from the graph it is checked against."""


@dataclass
class VerificationReport:
    kind: str
    samples: int
    ratios: list
    ratio_summary: dict
    max_ratio: float
    hops: list = field(default_factory=list)
    within: Optional[float] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _ratios(approx: np.ndarray, exact: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(exact > 0, approx / np.where(exact > 0, exact, 1), 1.0)
    return r


def verify(g: Graph, artifact, samples: int = 200, seed: int = 0,
           h: Optional[int] = None) -> VerificationReport:
    """Sample pairs (or edges, for spanners) and compare with Dijkstra.

    For hopsets ``h`` fixes the hop budget; by default each pair gets the
    hopset's predicted budget for its distance.
    """
    if isinstance(artifact, Spanner):
        return _verify_spanner(g, artifact, samples, seed)
    if isinstance(artifact, Hopset):
        return _verify_hopset(g, artifact, samples, seed, h)
    if isinstance(artifact, OracleIndex):
        return _verify_oracle(g, artifact, samples, seed)
    raise TypeError(f"cannot verify {type(artifact).__name__}")


def _verify_spanner(g: Graph, sp: Spanner, samples: int, seed: int) -> VerificationReport:
    if sp.n != g.n or sp.m != g.m:
        raise ArtifactMismatch(f"spanner built for n={sp.n} m={sp.m}, graph has n={g.n} m={g.m}")
    rng = np.random.default_rng(seed)
    ids = np.sort(rng.choice(g.m, size=min(samples, g.m), replace=False)) if g.m else np.zeros(0, int)
    d = edge_distances_in(sp.graph(g), g, ids)
    r = _ratios(d, edge_distances_in(g, g, ids)) if ids.size else np.zeros(0)
    return VerificationReport("spanner", int(ids.size), r.tolist(), summary(r),
                              float(r.max()) if r.size else 1.0, detail={"size": sp.size})


def _verify_hopset(g: Graph, hs: Hopset, samples: int, seed: int, h: Optional[int]) -> VerificationReport:
    if hs.n != g.n:
        raise ArtifactMismatch(f"hopset built for n={hs.n}, graph has n={g.n}")
    pairs = sample_pairs(g, samples, seed)
    exact = _exact_distances(g, pairs)
    aug = augment(g, hs)
    approx = np.empty(len(pairs))
    hops = []
    for i, (s, t) in enumerate(pairs):
        budget = h if h is not None else hs.predicted_h(exact[i])
        res = hop_limited_search(aug, s, budget, t)
        approx[i] = res.dist[t]
        hops.append(res.hops_to_reach(res.dist[t]) if np.isfinite(res.dist[t]) else -1)
    r = _ratios(approx, exact)
    within = float(np.mean(r <= 1 + hs.eps_total)) if r.size else 1.0
    return VerificationReport("hopset", len(pairs), r.tolist(), summary(r[np.isfinite(r)]),
                              float(r.max()) if r.size else 1.0, hops, within,
                              {"shortcuts": hs.size, "eps_total": hs.eps_total})


def _verify_oracle(g: Graph, o: OracleIndex, samples: int, seed: int) -> VerificationReport:
    if o.fingerprint and o.fingerprint != g.fingerprint():
        raise ArtifactMismatch("oracle index fingerprint does not match the graph")
    pairs = sample_pairs(g, samples, seed)
    exact = _exact_distances(g, pairs)
    res = query_many(o, pairs)
    approx = np.array([float(q.value) for q in res])
    r = _ratios(approx, exact)
    within = float(np.mean(np.abs(r - 1) <= o.epsilon)) if r.size else 1.0
    return VerificationReport("oracle", len(pairs), r.tolist(), summary(r), float(r.max()) if r.size else 1.0,
                              [q.hops if q.hops is not None else -1 for q in res], within,
                              {"fallbacks": int(sum(q.fallback for q in res))})
