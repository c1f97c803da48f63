from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from estgraph.cluster import (
    ClusterParams,
    ball,
    cluster_diagnostics,
    clusters_meeting_ball,
    est_cluster,
    sample_shifts,
)
from estgraph.graph import build_graph, from_canonical
from estgraph.harness.generators import gnm_graph, grid_graph, path_graph
from estgraph.sssp import all_pairs

P = ClusterParams(beta=0.2, seed=1)


def brute_assignment(g, shifts):
    """Reference argmin with ties to the smaller center."""
    d = all_pairs(g)
    out = np.empty(g.n, dtype=np.int64)
    for v in range(g.n):
        best = None
        for u in range(g.n):
            if not np.isfinite(d[u, v]):
                continue
            cand = (d[u, v] - shifts[u], u)
            if best is None or cand < best:
                best = cand
        out[v] = best[1]
    return out


def check_clustering(g, c):
    n = g.n
    assert (c.center[c.center] == c.center).all()
    for v in range(n):
        p = c.parent[v]
        if c.center[v] == v:
            assert p == -1
            continue
        e = c.parent_edge[v]
        assert {int(g.eu[e]), int(g.ev[e])} == {v, int(p)}
        assert c.center[p] == c.center[v]
    # every tree is rooted at its center: walking up terminates there
    for v in range(n):
        x, steps = v, 0
        while c.parent[x] >= 0:
            x = c.parent[x]
            steps += 1
            assert steps <= n
        assert x == c.center[v]


def test_sample_shifts():
    assert sample_shifts(0, 0.5, 1).size == 0
    a = sample_shifts(10 ** 6, 0.1, 42)
    assert abs(a.mean() - 10) <= 3 * 10 / math.sqrt(a.size)
    assert (a == sample_shifts(10 ** 6, 0.1, 42)).all()


def test_single_vertex():
    g = build_graph([], 1)
    c = est_cluster(g, P)
    assert c.center.tolist() == [0]


def test_two_vertices_are_singletons():
    g = build_graph([(0, 1)], 2)
    c = est_cluster(g, P, shifts=[0.9, 0.1])
    assert c.center.tolist() == [0, 1]
    assert c.center.tolist() == brute_assignment(g, np.array([0.9, 0.1])).tolist()


def test_tie_goes_to_smaller_center():
    g = build_graph([(0, 1), (1, 2)], 3)
    c = est_cluster(g, P, shifts=[2.0, 0.0, 0.0])
    assert c.center.tolist() == [0, 0, 0]


def test_params_validation():
    with pytest.raises(ValueError):
        ClusterParams(beta=1.0)
    with pytest.raises(ValueError):
        ClusterParams(beta=0.5, confidence=0.5)
    with pytest.raises(ValueError):
        ClusterParams(beta=0.5, mode="fast")


def test_rounds_mode_needs_integer_weights():
    g = build_graph([(0, 1, 1), (1, 2, 1.5)], 3)
    with pytest.raises(ValueError, match="integer"):
        est_cluster(g, ClusterParams(beta=0.3, mode="rounds"))


def test_empty_graph_clustering():
    c = est_cluster(from_canonical(0, [], [], []), ClusterParams(beta=0.3, mode="rounds"))
    assert c.center.size == 0 and c.round_count == 0
    assert est_cluster(build_graph([], 1), ClusterParams(beta=0.3, mode="rounds")).round_count == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.integers(0, 120), st.integers(0, 2 ** 32), st.booleans())
def test_exact_mode_matches_brute_force(n, m, seed, weighted):
    g = gnm_graph(n, min(m, n * (n - 1) // 2), weights=(1, 9) if weighted else None, seed=seed)
    c = est_cluster(g, ClusterParams(beta=0.3, seed=seed))
    assert c.center.tolist() == brute_assignment(g, c.shifts).tolist()
    check_clustering(g, c)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(0, 200), st.integers(0, 2 ** 32))
def test_rounds_mode_partition_and_forest(n, m, seed):
    g = gnm_graph(n, min(m, n * (n - 1) // 2), weights=(1, 5), seed=seed)
    c = est_cluster(g, ClusterParams(beta=0.3, seed=seed, mode="rounds"))
    check_clustering(g, c)
    assert c.round_count >= 1
    # integer start times make the argmin exact on the floored shifts
    fl = np.floor(c.shifts)
    ref = brute_assignment(g, fl)
    d = all_pairs(g)
    for v in range(n):
        assert d[c.center[v], v] - fl[c.center[v]] == d[ref[v], v] - fl[ref[v]]


def test_diagnostics_one_cluster_and_singletons():
    g = path_graph(6)
    one = est_cluster(g, P, shifts=[100, 0, 0, 0, 0, 0])
    st1 = cluster_diagnostics(g, one)
    assert st1.cut_edges.size == 0 and st1.num_clusters == 1
    assert st1.max_diameter == 5 and st1.max_radius == 5
    single = est_cluster(g, P, shifts=np.zeros(6))
    st2 = cluster_diagnostics(g, single)
    assert st2.cut_edges.tolist() == list(range(g.m))


def test_diagnostics_hand_example():
    # 0-1-2-3 path plus 1-4; centers 0 (grabs 0,1,4) and 3 (grabs 2,3)
    g = build_graph([(0, 1), (1, 2), (2, 3), (1, 4)], 5)
    c = est_cluster(g, P, shifts=[2.0, 0, 0, 1.5, 0])
    assert c.center.tolist() == [0, 0, 3, 3, 0]
    stats = cluster_diagnostics(g, c)
    cut = {(int(g.eu[e]), int(g.ev[e])) for e in stats.cut_edges}
    assert cut == {(1, 2)}
    assert sorted(stats.sizes.tolist()) == [2, 3]
    assert stats.diameters.tolist() == [2.0, 1.0]


def test_diameter_matches_tree_bruteforce():
    g = grid_graph(8, 8, weights=(1, 4), seed=2)
    c = est_cluster(g, ClusterParams(beta=0.3, seed=5))
    stats = cluster_diagnostics(g, c)
    forest = build_graph([(int(g.eu[e]), int(g.ev[e]), float(g.ew[e])) for e in c.forest_edges()],
                         g.n, normalize=False)
    d = all_pairs(forest)
    for i, cen in enumerate(stats.centers.tolist()):
        mem = np.nonzero(c.center == cen)[0]
        assert stats.diameters[i] == d[np.ix_(mem, mem)].max()


def test_ball_and_meeting_clusters():
    g = path_graph(11)
    assert ball(g, 5, 2).tolist() == [3, 4, 5, 6, 7]
    c = est_cluster(g, P, shifts=np.zeros(11))
    assert clusters_meeting_ball(g, c, 5, 1).tolist() == [4, 5, 6]


def test_determinism_and_seed_dependence():
    g = gnm_graph(300, 1200, seed=4)
    a = est_cluster(g, ClusterParams(beta=0.2, seed=9))
    b = est_cluster(g, ClusterParams(beta=0.2, seed=9))
    c = est_cluster(g, ClusterParams(beta=0.2, seed=10))
    assert (a.center == b.center).all() and (a.parent == b.parent).all()
    assert not (a.center == c.center).all()


def test_disconnected_components_clustered_separately():
    g = build_graph([(0, 1), (2, 3)], 5)
    c = est_cluster(g, P, shifts=[5, 0, 0, 5, 0])
    assert c.center.tolist() == [0, 0, 3, 3, 4]
