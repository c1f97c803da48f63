from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from estgraph.graph import build_graph
from estgraph.harness.generators import gnm_graph, path_graph
from estgraph.hopset.decomposition import map_query, weight_decomposition
from estgraph.sssp import all_pairs


def two_groups():
    # two light triangles joined by one heavy edge
    edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1000)]
    return build_graph(edges, 6)


def test_uniform_weights_single_query_graph():
    g = gnm_graph(100, 300, seed=1)
    wd = weight_decomposition(g, 0.5)
    assert wd.depth == 1 and len(wd.query_graphs) == 1
    qg = wd.query_graphs[0].graph
    assert qg.n == g.n - int((g.degree() == 0).sum())
    assert qg.m == g.m


def test_validation():
    with pytest.raises(ValueError):
        weight_decomposition(path_graph(3), 1.0)
    with pytest.raises(ValueError):
        map_query(weight_decomposition(path_graph(3), 0.5), 0, 9)


def test_two_group_example():
    g = two_groups()
    wd = weight_decomposition(g, 0.5)
    assert wd.depth == 2
    assert wd.edge_level[g.ew == 1].tolist() == [1] * 6
    assert wd.edge_level[g.ew == 1000].tolist() == [2]
    light = map_query(wd, 0, 2)
    heavy = map_query(wd, 0, 5)
    assert (light.status, light.level) == ("ok", 1)
    assert (heavy.status, heavy.level) == ("ok", 2)
    assert map_query(wd, 4, 4).status == "same"
    # with two categories no level is ever contracted, so both graphs are g itself
    for qg in wd.query_graphs:
        assert qg.graph.n == 6 and qg.graph.m == 7


def test_unreachable_query():
    g = build_graph([(0, 1), (2, 3)], 4)
    assert map_query(weight_decomposition(g, 0.5), 0, 3).status == "unreachable"


def test_contraction_on_deep_chain():
    # four categories: the level-4 graph contracts the components of level 2
    n = 8
    eps = 0.5
    b = n / eps
    edges = [(0, 1, 1), (1, 2, b), (2, 3, b ** 2), (3, 4, b ** 3), (4, 5, 1), (5, 6, b), (6, 7, b ** 2)]
    g = build_graph(edges, n, normalize=False)
    wd = weight_decomposition(g, eps)
    assert wd.depth == 4
    q4 = wd.query_graphs[3]
    vm = q4.vertex_map
    assert vm[0] == vm[1] == vm[2] and vm[4] == vm[5] == vm[6]
    # only edges of categories 3 and 4 survive in the last graph
    assert sorted(g.ew[q4.edge_witness].tolist()) == [b ** 2, b ** 2, b ** 3]


def test_laminar_and_copies_bound():
    rng = np.random.default_rng(4)
    g0 = gnm_graph(100, 400, seed=4)
    w = np.exp(rng.uniform(0, np.log(1e12), size=g0.m))
    g = build_graph(list(zip(g0.eu.tolist(), g0.ev.tolist(), w.tolist())), 100)
    wd = weight_decomposition(g, 0.1)
    assert wd.is_laminar()
    assert wd.edge_copies().max() <= 3


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.integers(1, 80), st.integers(0, 2 ** 32))
def test_query_graph_preserves_distance(n, m, seed):
    rng = np.random.default_rng(seed)
    g0 = gnm_graph(n, min(m, n * (n - 1) // 2), seed=seed)
    w = np.exp(rng.uniform(0, np.log(1e9), size=g0.m))
    g = build_graph(list(zip(g0.eu.tolist(), g0.ev.tolist(), w.tolist())), n)
    eps = 0.5
    wd = weight_decomposition(g, eps)
    assert wd.is_laminar()
    d = all_pairs(g)
    cache = {}
    for s in range(n):
        for t in range(n):
            qm = map_query(wd, s, t)
            if qm.status != "ok":
                assert qm.status == "same" or not np.isfinite(d[s, t])
                continue
            if qm.graph not in cache:
                cache[qm.graph] = all_pairs(wd.query_graphs[qm.graph].graph)
            dq = cache[qm.graph][qm.s, qm.t]
            # contraction only removes light edges, so the answer stays within 1 + eps
            assert dq <= d[s, t] * (1 + 1e-9)
            assert dq >= d[s, t] / (1 + eps) - 1e-9
