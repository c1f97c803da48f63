"""Pure-Python reference kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and bit-identical output. Heap entries are compared on the full
tuple ``(key, tie, vertex, parent, edge)`` in both backends so the settle
order, and therefore every tie-break, is the same.
"""
from __future__ import annotations

import heapq
import math

import numpy as np

INF = math.inf


def shifted_dijkstra(indptr, adj, adj_w, adj_e, start):
    """Multi-source Dijkstra with start offsets and lexicographic labels.

    Vertex ``v`` with finite ``start[v]`` is a source whose label is
    ``(start[v], v)``. Labels propagate as ``(key + w, tie)`` and a vertex
    keeps the lexicographically smallest label it receives.

    Returns ``(tie, key, parent, parent_edge, order)``; unreached vertices
    have ``tie == -1`` and ``key == inf``. ``order`` lists settled vertices.
    """
    n = len(indptr) - 1
    indptr = indptr.tolist()
    adj = adj.tolist()
    adj_w = adj_w.tolist()
    adj_e = adj_e.tolist()
    start = np.asarray(start, dtype=np.float64).tolist()

    best_key = [INF] * n
    best_tie = [-1] * n
    settled = [False] * n
    parent = [-1] * n
    parent_edge = [-1] * n
    order = []
    heap = []
    for v in range(n):
        s = start[v]
        if s != INF:
            best_key[v] = s
            best_tie[v] = v
            heap.append((s, v, v, -1, -1))
    heapq.heapify(heap)

    while heap:
        key, tie, v, par, edge = heapq.heappop(heap)
        if settled[v]:
            continue
        settled[v] = True
        best_key[v] = key
        best_tie[v] = tie
        parent[v] = par
        parent_edge[v] = edge
        order.append(v)
        for a in range(indptr[v], indptr[v + 1]):
            x = adj[a]
            if settled[x]:
                continue
            nk = key + adj_w[a]
            bk = best_key[x]
            if nk < bk or (nk == bk and tie < best_tie[x]):
                best_key[x] = nk
                best_tie[x] = tie
                heapq.heappush(heap, (nk, tie, x, v, adj_e[a]))

    for v in range(n):
        if not settled[v]:
            best_key[v] = INF
            best_tie[v] = -1
    return (
        np.array(best_tie, dtype=np.int64),
        np.array(best_key, dtype=np.float64),
        np.array(parent, dtype=np.int64),
        np.array(parent_edge, dtype=np.int64),
        np.array(order, dtype=np.int64),
    )


def bfs(indptr, adj, source):
    """Level-synchronous BFS. Returns hop distances (-1 = unreachable)."""
    n = len(indptr) - 1
    indptr = indptr.tolist()
    adj = adj.tolist()
    dist = [-1] * n
    dist[source] = 0
    frontier = [source]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for u in frontier:
            for a in range(indptr[u], indptr[u + 1]):
                x = adj[a]
                if dist[x] < 0:
                    dist[x] = level
                    nxt.append(x)
        frontier = nxt
    return np.array(dist, dtype=np.int64)


def hop_limited(indptr, adj, adj_w, source, h, target):
    """Synchronous Bellman-Ford: ``h`` rounds of relaxation from ``source``.

    Round ``r`` computes ``dist_r[x] = min(dist_{r-1}[x], dist_{r-1}[u] + w)``
    over arcs ``u -> x``; only vertices improved in round ``r-1`` are
    relaxed, which yields the same values. Stops early once nothing changes.

    Returns ``(dist, trace, rounds)`` where ``trace[r]`` is the ``r``-hop
    distance to ``target`` (``target < 0`` disables tracing) and ``rounds``
    the number of rounds executed.
    """
    n = len(indptr) - 1
    indptr = indptr.tolist()
    adj = adj.tolist()
    adj_w = adj_w.tolist()
    cur = [INF] * n
    nxt = [INF] * n
    cur[source] = 0.0
    nxt[source] = 0.0
    trace = [cur[target] if target >= 0 else INF]
    frontier = [source]
    stamp = [-1] * n
    rounds = 0
    while frontier and rounds < h:
        rounds += 1
        changed = []
        for u in frontier:
            du = cur[u]
            for a in range(indptr[u], indptr[u + 1]):
                x = adj[a]
                nd = du + adj_w[a]
                if nd < nxt[x]:
                    nxt[x] = nd
                    if stamp[x] != rounds:
                        stamp[x] = rounds
                        changed.append(x)
        for x in changed:
            cur[x] = nxt[x]
        frontier = changed
        if target >= 0:
            trace.append(cur[target])
    return (
        np.array(cur, dtype=np.float64),
        np.array(trace, dtype=np.float64),
        rounds,
    )


def center_distances(indptr, adj, adj_w, centers):
    """Pairwise distances between ``centers`` via one Dijkstra per center."""
    n = len(indptr) - 1
    k = len(centers)
    out = np.full((k, k), INF, dtype=np.float64)
    pos = {int(c): i for i, c in enumerate(centers)}
    indptr_l = indptr.tolist()
    adj_l = adj.tolist()
    w_l = adj_w.tolist()
    for i, c in enumerate(centers):
        dist = [INF] * n
        done = [False] * n
        dist[int(c)] = 0.0
        heap = [(0.0, int(c))]
        found = 0
        while heap and found < k:
            d, v = heapq.heappop(heap)
            if done[v]:
                continue
            done[v] = True
            j = pos.get(v)
            if j is not None:
                out[i, j] = d
                found += 1
            for a in range(indptr_l[v], indptr_l[v + 1]):
                x = adj_l[a]
                nd = d + w_l[a]
                if nd < dist[x]:
                    dist[x] = nd
                    heapq.heappush(heap, (nd, x))
    return out
