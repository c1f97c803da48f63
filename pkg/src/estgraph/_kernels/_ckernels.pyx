# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Semantics mirror ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef long long i64

ctypedef struct Entry:
    double key
    i64 tie
    i64 vertex
    i64 parent
    i64 edge


cdef inline bint entry_less(Entry* a, Entry* b) noexcept nogil:
    if a.key != b.key:
        return a.key < b.key
    if a.tie != b.tie:
        return a.tie < b.tie
    if a.vertex != b.vertex:
        return a.vertex < b.vertex
    if a.parent != b.parent:
        return a.parent < b.parent
    return a.edge < b.edge


cdef inline void heap_push(Entry* heap, i64* size, Entry e) noexcept nogil:
    cdef i64 i = size[0]
    cdef i64 p
    size[0] += 1
    heap[i] = e
    while i > 0:
        p = (i - 1) >> 1
        if entry_less(&heap[i], &heap[p]):
            heap[i], heap[p] = heap[p], heap[i]
            i = p
        else:
            break


cdef inline Entry heap_pop(Entry* heap, i64* size) noexcept nogil:
    cdef Entry top = heap[0]
    cdef i64 n, i, l, r, m
    size[0] -= 1
    n = size[0]
    if n > 0:
        heap[0] = heap[n]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            m = i
            if l < n and entry_less(&heap[l], &heap[m]):
                m = l
            if r < n and entry_less(&heap[r], &heap[m]):
                m = r
            if m == i:
                break
            heap[i], heap[m] = heap[m], heap[i]
            i = m
    return top


def shifted_dijkstra(const i64[::1] indptr, const i64[::1] adj,
                     const double[::1] adj_w, const i64[::1] adj_e,
                     const double[::1] start):
    cdef i64 n = indptr.shape[0] - 1
    cdef i64 narcs = adj.shape[0]
    tie_arr = np.full(n, -1, dtype=np.int64)
    key_arr = np.full(n, INFINITY, dtype=np.float64)
    par_arr = np.full(n, -1, dtype=np.int64)
    pe_arr = np.full(n, -1, dtype=np.int64)
    order_arr = np.empty(n, dtype=np.int64)
    settled_arr = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] best_tie = tie_arr
    cdef double[::1] best_key = key_arr
    cdef i64[::1] parent = par_arr
    cdef i64[::1] parent_edge = pe_arr
    cdef i64[::1] order = order_arr
    cdef unsigned char[::1] settled = settled_arr
    cdef Entry* heap = <Entry*> malloc((n + narcs + 1) * sizeof(Entry))
    if heap == NULL:
        raise MemoryError()
    cdef i64 size = 0
    cdef i64 nsettled = 0
    cdef i64 v, a, x
    cdef double nk, bk
    cdef Entry e, f
    try:
        with nogil:
            for v in range(n):
                if start[v] != INFINITY:
                    best_key[v] = start[v]
                    best_tie[v] = v
                    e.key = start[v]
                    e.tie = v
                    e.vertex = v
                    e.parent = -1
                    e.edge = -1
                    heap_push(heap, &size, e)
            while size > 0:
                e = heap_pop(heap, &size)
                v = e.vertex
                if settled[v]:
                    continue
                settled[v] = 1
                best_key[v] = e.key
                best_tie[v] = e.tie
                parent[v] = e.parent
                parent_edge[v] = e.edge
                order[nsettled] = v
                nsettled += 1
                for a in range(indptr[v], indptr[v + 1]):
                    x = adj[a]
                    if settled[x]:
                        continue
                    nk = e.key + adj_w[a]
                    bk = best_key[x]
                    if nk < bk or (nk == bk and e.tie < best_tie[x]):
                        best_key[x] = nk
                        best_tie[x] = e.tie
                        f.key = nk
                        f.tie = e.tie
                        f.vertex = x
                        f.parent = v
                        f.edge = adj_e[a]
                        heap_push(heap, &size, f)
            for v in range(n):
                if not settled[v]:
                    best_key[v] = INFINITY
                    best_tie[v] = -1
    finally:
        free(heap)
    return tie_arr, key_arr, par_arr, pe_arr, order_arr[:nsettled].copy()


def bfs(const i64[::1] indptr, const i64[::1] adj, i64 source):
    cdef i64 n = indptr.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int64)
    queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] queue = queue_arr
    cdef i64 head = 0, tail = 0, u, a, x
    with nogil:
        dist[source] = 0
        queue[tail] = source
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for a in range(indptr[u], indptr[u + 1]):
                x = adj[a]
                if dist[x] < 0:
                    dist[x] = dist[u] + 1
                    queue[tail] = x
                    tail += 1
    return dist_arr


def hop_limited(const i64[::1] indptr, const i64[::1] adj,
                const double[::1] adj_w, i64 source, i64 h, i64 target):
    cdef i64 n = indptr.shape[0] - 1
    cur_arr = np.full(n, INFINITY, dtype=np.float64)
    nxt_arr = np.full(n, INFINITY, dtype=np.float64)
    stamp_arr = np.full(n, -1, dtype=np.int64)
    front_arr = np.empty(max(n, 1), dtype=np.int64)
    chg_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef double[::1] cur = cur_arr
    cdef double[::1] nxt = nxt_arr
    cdef i64[::1] stamp = stamp_arr
    cdef i64[::1] front = front_arr
    cdef i64[::1] chg = chg_arr
    trace = []
    cdef i64 nfront = 1, nchg, rounds = 0, i, u, a, x
    cdef double du, nd
    cur[source] = 0.0
    nxt[source] = 0.0
    front[0] = source
    trace.append(cur[target] if target >= 0 else INFINITY)
    while nfront > 0 and rounds < h:
        rounds += 1
        nchg = 0
        with nogil:
            for i in range(nfront):
                u = front[i]
                du = cur[u]
                for a in range(indptr[u], indptr[u + 1]):
                    x = adj[a]
                    nd = du + adj_w[a]
                    if nd < nxt[x]:
                        nxt[x] = nd
                        if stamp[x] != rounds:
                            stamp[x] = rounds
                            chg[nchg] = x
                            nchg += 1
            for i in range(nchg):
                x = chg[i]
                cur[x] = nxt[x]
                front[i] = x
        nfront = nchg
        if target >= 0:
            trace.append(cur[target])
    return cur_arr, np.array(trace, dtype=np.float64), rounds


def center_distances(const i64[::1] indptr, const i64[::1] adj,
                     const double[::1] adj_w, const i64[::1] centers):
    cdef i64 n = indptr.shape[0] - 1
    cdef i64 k = centers.shape[0]
    cdef i64 narcs = adj.shape[0]
    out_arr = np.full((k, k), INFINITY, dtype=np.float64)
    pos_arr = np.full(n, -1, dtype=np.int64)
    dist_arr = np.empty(n, dtype=np.float64)
    done_arr = np.empty(n, dtype=np.uint8)
    cdef double[:, ::1] out = out_arr
    cdef i64[::1] pos = pos_arr
    cdef double[::1] dist = dist_arr
    cdef unsigned char[::1] done = done_arr
    cdef Entry* heap = <Entry*> malloc((narcs + 2) * sizeof(Entry))
    if heap == NULL:
        raise MemoryError()
    cdef i64 size, found, i, j, c, v, a, x
    cdef double nd
    cdef Entry e, f
    try:
        with nogil:
            for i in range(k):
                pos[centers[i]] = i
            for i in range(k):
                for v in range(n):
                    dist[v] = INFINITY
                    done[v] = 0
                c = centers[i]
                dist[c] = 0.0
                size = 0
                e.key = 0.0
                e.tie = 0
                e.vertex = c
                e.parent = -1
                e.edge = -1
                heap_push(heap, &size, e)
                found = 0
                while size > 0 and found < k:
                    e = heap_pop(heap, &size)
                    v = e.vertex
                    if done[v]:
                        continue
                    done[v] = 1
                    j = pos[v]
                    if j >= 0:
                        out[i, j] = e.key
                        found += 1
                    for a in range(indptr[v], indptr[v + 1]):
                        x = adj[a]
                        nd = e.key + adj_w[a]
                        if nd < dist[x]:
                            dist[x] = nd
                            f.key = nd
                            f.tie = 0
                            f.vertex = x
                            f.parent = -1
                            f.edge = -1
                            heap_push(heap, &size, f)
    finally:
        free(heap)
    return out_arr
