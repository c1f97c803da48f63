"""Immutable undirected weighted graphs in CSR form, plus contraction helpers.

Edges are stored once in canonical form ``u < v`` and sorted by ``(u, v)``;
the position in that order is the edge id. Weights are float64 but the
normalization to minimum weight 1 is carried out in exact rational
arithmetic, so integral inputs stay exactly integral.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _scipy_cc


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    eu: np.ndarray
    ev: np.ndarray
    ew: np.ndarray
    indptr: np.ndarray = field(repr=False)
    adj: np.ndarray = field(repr=False)
    adj_w: np.ndarray = field(repr=False)
    adj_e: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return int(self.eu.shape[0])

    @property
    def is_unweighted(self) -> bool:
        return bool(np.all(self.ew == 1.0))

    @property
    def is_integral(self) -> bool:
        return bool(np.all(self.ew == np.floor(self.ew)))

    @property
    def weight_ratio(self) -> float:
        if self.m == 0:
            return 1.0
        return float(self.ew.max() / self.ew.min())

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.eu.tolist(), self.ev.tolist(), self.ew.tolist()))

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj[self.indptr[v]:self.indptr[v + 1]]

    def unit(self) -> "Graph":
        """Same topology with every weight set to 1."""
        return from_canonical(self.n, self.eu, self.ev, np.ones(self.m))

    def with_weights(self, ew: np.ndarray) -> "Graph":
        return from_canonical(self.n, self.eu, self.ev, np.asarray(ew, dtype=np.float64))

    def to_scipy(self):
        """Symmetric CSR matrix (explicit entries are the edge weights)."""
        return coo_matrix(
            (np.concatenate([self.ew, self.ew]),
             (np.concatenate([self.eu, self.ev]), np.concatenate([self.ev, self.eu]))),
            shape=(self.n, self.n),
        ).tocsr()

    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        for a in (self.eu, self.ev, self.ew):
            h.update(np.ascontiguousarray(a).tobytes())
        return h.hexdigest()[:16]


def from_canonical(n: int, eu, ev, ew) -> Graph:
    """Build from edges that are already canonical, sorted and unique."""
    eu = np.ascontiguousarray(eu, dtype=np.int64)
    ev = np.ascontiguousarray(ev, dtype=np.int64)
    ew = np.ascontiguousarray(ew, dtype=np.float64)
    m = eu.shape[0]
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    w = np.concatenate([ew, ew])
    eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2)
    order = np.lexsort((dst, src))
    counts = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Graph(
        n=int(n),
        eu=_frozen(eu),
        ev=_frozen(ev),
        ew=_frozen(ew),
        indptr=_frozen(indptr),
        adj=_frozen(np.ascontiguousarray(dst[order])),
        adj_w=_frozen(np.ascontiguousarray(w[order])),
        adj_e=_frozen(np.ascontiguousarray(eid[order])),
    )


def _merge_min(n, u, v, w, ids=None):
    """Canonicalize, drop loops, keep the min weight per pair (ties: min id)."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    if ids is None:
        ids = np.arange(u.shape[0], dtype=np.int64)
    keep = u != v
    u, v, w, ids = u[keep], v[keep], w[keep], ids[keep]
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    order = np.lexsort((ids, w, b, a))
    a, b, w, ids = a[order], b[order], w[order], ids[order]
    if a.shape[0]:
        first = np.ones(a.shape[0], dtype=bool)
        first[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
        a, b, w, ids = a[first], b[first], w[first], ids[first]
    return a, b, w, ids


def build_graph(raw_edges: Iterable[Sequence], n: int, normalize: bool = True) -> Graph:
    """Validate, deduplicate and normalize a raw edge list.

    Each raw edge is ``(u, v)`` or ``(u, v, w)``. Self-loops are dropped and
    parallel edges keep their minimum weight. With ``normalize`` the weights
    are divided by the minimum weight (exactly) so that it becomes 1.
    """
    raw = list(raw_edges)
    if n == 0 and not raw:
        raise ValueError("empty graph")
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    us, vs, ws = [], [], []
    for e in raw:
        u, v = int(e[0]), int(e[1])
        w = e[2] if len(e) > 2 else 1
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"vertex id out of range in edge {tuple(e)}")
        if isinstance(w, Fraction):
            ok = w > 0
        else:
            w = float(w)
            ok = math.isfinite(w) and w > 0
        if not ok:
            raise ValueError("invalid weight")
        us.append(u)
        vs.append(v)
        ws.append(w)
    exact = [Fraction(w) for w in ws]
    if normalize and exact:
        loops = [u == v for u, v in zip(us, vs)]
        live = [x for x, lp in zip(exact, loops) if not lp]
        if live:
            wmin = min(live)
            exact = [x / wmin for x in exact]
    wf = np.array([float(x) for x in exact], dtype=np.float64)
    a, b, w, _ = _merge_min(n, us, vs, wf)
    return from_canonical(n, a, b, w)


class Subgraph(NamedTuple):
    graph: Graph
    vertices: np.ndarray
    edge_ids: np.ndarray


def induced_subgraph(g: Graph, vs) -> Subgraph:
    """Subgraph on ``vs`` relabeled ``0..|vs|-1`` in increasing original id.

    Weights are kept as-is (no renormalization) so distances compare
    directly with the parent graph. ``vertices[i]`` is the original id of new
    vertex ``i`` and ``edge_ids[j]`` the original id of new edge ``j``.
    """
    vs = np.unique(np.asarray(list(vs) if not isinstance(vs, np.ndarray) else vs, dtype=np.int64))
    if vs.size and (vs[0] < 0 or vs[-1] >= g.n):
        raise ValueError("vertex id out of range")
    local = np.full(g.n, -1, dtype=np.int64)
    local[vs] = np.arange(vs.size, dtype=np.int64)
    mask = (local[g.eu] >= 0) & (local[g.ev] >= 0)
    eids = np.nonzero(mask)[0].astype(np.int64)
    sub = from_canonical(vs.size, local[g.eu[eids]], local[g.ev[eids]], g.ew[eids])
    return Subgraph(sub, vs, eids)


def edge_subgraph(g: Graph, edge_ids) -> Subgraph:
    """Spanning subgraph keeping only ``edge_ids`` (vertex ids unchanged)."""
    eids = np.unique(np.asarray(edge_ids, dtype=np.int64))
    if eids.size and (eids[0] < 0 or eids[-1] >= g.m):
        raise ValueError("edge id out of range")
    sub = from_canonical(g.n, g.eu[eids], g.ev[eids], g.ew[eids])
    return Subgraph(sub, np.arange(g.n, dtype=np.int64), eids)


def connected_components(g: Graph, edge_ids=None) -> np.ndarray:
    """Component labels, numbered densely in order of smallest member.

    With ``edge_ids`` only those edges are considered.
    """
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    if edge_ids is None:
        eu, ev = g.eu, g.ev
    else:
        eids = np.asarray(edge_ids, dtype=np.int64)
        eu, ev = g.eu[eids], g.ev[eids]
    mat = coo_matrix((np.ones(eu.shape[0]), (eu, ev)), shape=(g.n, g.n))
    _, raw = _scipy_cc(mat, directed=False)
    return _relabel_by_first(raw)


def _relabel_by_first(raw: np.ndarray) -> np.ndarray:
    _, first, inv = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inv].astype(np.int64)


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    graph: Graph
    vertex_map: np.ndarray
    edge_witness: np.ndarray

    def members(self) -> list[np.ndarray]:
        order = np.argsort(self.vertex_map, kind="stable")
        bounds = np.searchsorted(self.vertex_map[order], np.arange(self.graph.n + 1))
        return [order[bounds[i]:bounds[i + 1]] for i in range(self.graph.n)]


def quotient(g: Graph, labels, edge_ids=None) -> QuotientGraph:
    """Quotient of ``g`` by a vertex labeling.

    ``labels`` must be dense ``0..q-1``. Only ``edge_ids`` (default: all)
    are mapped. Edges inside a class vanish; parallel edges keep the lightest
    one, ties broken by smaller original edge id, which becomes the witness.
    """
    labels = np.asarray(labels, dtype=np.int64)
    q = int(labels.max()) + 1 if labels.size else 0
    if edge_ids is None:
        eids = np.arange(g.m, dtype=np.int64)
    else:
        eids = np.asarray(edge_ids, dtype=np.int64)
    a, b, w, wit = _merge_min(q, labels[g.eu[eids]], labels[g.ev[eids]], g.ew[eids], eids)
    return QuotientGraph(from_canonical(q, a, b, w), _frozen(labels.copy()), _frozen(wit))


def contract(g: Graph, contracted_edges) -> QuotientGraph:
    """Contract the components of ``(V, contracted_edges)``."""
    labels = connected_components(g, contracted_edges)
    return quotient(g, labels)


@dataclass(frozen=True)
class EdgeBuckets:
    base: Fraction
    buckets: dict

    def index_of(self) -> dict:
        out = {}
        for i, ids in self.buckets.items():
            for e in ids.tolist():
                out[e] = i
        return out


def bucket_index(w: float, base: Fraction, first_index: int = 1) -> int:
    """Index ``i`` with ``base**(i - first_index) <= w < base**(i - first_index + 1)``."""
    base = Fraction(base)
    x = Fraction(w)
    j = int(math.floor(math.log(float(x)) / math.log(float(base)))) if x > 0 else 0
    while base ** j > x:
        j -= 1
    while base ** (j + 1) <= x:
        j += 1
    return j + first_index


def bucket_edges(g: Graph, base, first_index: int = 1) -> EdgeBuckets:
    """Partition edges into geometric weight classes.

    Edge ``e`` is in bucket ``i`` iff
    ``base**(i - first_index) <= w(e) < base**(i - first_index + 1)``.
    With base 2 and ``first_index=1`` unit weights land in bucket 1.
    """
    base = Fraction(base)
    if base <= 1:
        raise ValueError("base must exceed 1")
    cache: dict[float, int] = {}
    idx = np.empty(g.m, dtype=np.int64)
    for e, w in enumerate(g.ew.tolist()):
        i = cache.get(w)
        if i is None:
            i = cache[w] = bucket_index(w, base, first_index)
        idx[e] = i
    buckets = {}
    for i in np.unique(idx).tolist():
        buckets[int(i)] = _frozen(np.nonzero(idx == i)[0].astype(np.int64))
    return EdgeBuckets(base, buckets)


def _parse_weight(tok: str):
    try:
        return int(tok)
    except ValueError:
        pass
    if "/" in tok:
        return Fraction(tok)
    return float(tok)


def read_edge_list(source, normalize: bool = True) -> Graph:
    """Parse the ``n m [weighted|unweighted]`` text format.

    ``source`` is a path or a file-like object. Lines starting with ``#``
    and blank lines are ignored.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("missing header")
    head = lines[0].split()
    n, m = int(head[0]), int(head[1])
    weighted = len(head) < 3 or head[2] == "weighted"
    if len(head) >= 3 and head[2] not in ("weighted", "unweighted"):
        raise ValueError(f"unknown graph kind {head[2]!r}")
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header says {m} edges, found {len(body)}")
    raw = []
    for ln in body:
        tok = ln.split()
        if weighted and len(tok) >= 3:
            raw.append((int(tok[0]), int(tok[1]), _parse_weight(tok[2])))
        else:
            raw.append((int(tok[0]), int(tok[1]), 1))
    return build_graph(raw, n, normalize=normalize)


def format_weight(w: float) -> str:
    if w == math.floor(w) and abs(w) < 2 ** 53:
        return str(int(w))
    return repr(float(w))


def write_edge_list(g: Graph, dest=None) -> str:
    """Serialize ``g``; writes to ``dest`` when given and returns the text."""
    buf = io.StringIO()
    kind = "unweighted" if g.is_unweighted else "weighted"
    buf.write(f"{g.n} {g.m} {kind}\n")
    for u, v, w in zip(g.eu.tolist(), g.ev.tolist(), g.ew.tolist()):
        if kind == "unweighted":
            buf.write(f"{u} {v}\n")
        else:
            buf.write(f"{u} {v} {format_weight(w)}\n")
    text = buf.getvalue()
    if dest is not None:
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            Path(dest).write_text(text)
    return text
