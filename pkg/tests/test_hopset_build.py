from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from estgraph.harness.generators import gnm_graph, grid_graph, path_graph
from estgraph.hopset import HopsetParams, hopset_build
from estgraph.hopset.build import CLIQUE, STAR, witness_mismatches
from estgraph.sssp import all_pairs, augment, dijkstra, hop_limited_search

P = HopsetParams(epsilon=0.5, delta=1.5, gamma1=0.3, gamma2=0.6)


def test_params_validation():
    with pytest.raises(ValueError):
        HopsetParams(delta=1.0)
    with pytest.raises(ValueError):
        HopsetParams(gamma1=0.6, gamma2=0.3)
    with pytest.raises(ValueError):
        HopsetParams(epsilon=1.5)
    with pytest.raises(ValueError):
        HopsetParams(repetitions=0)


def test_schedule_values():
    sch = P.resolve(2000)
    ln = np.log(2000)
    eps = 0.5 / ln
    assert sch.eps == pytest.approx(eps)
    assert sch.growth == pytest.approx(2 * ln / eps)
    assert sch.rho == pytest.approx(sch.growth ** 1.5)
    assert sch.beta0 == pytest.approx(2000 ** -0.6)
    assert sch.n_final == pytest.approx(2000 ** 0.3)
    assert sch.beta(2) == sch.beta0 * sch.growth ** 2
    assert sch.beta_used(5) == 0.99
    w = HopsetParams(weighted=True).resolve(2000)
    assert w.beta0 == pytest.approx((2000 / eps) ** -0.6)


def test_small_graph_gives_empty_hopset():
    g = gnm_graph(50, 200, seed=1)
    h = hopset_build(g, HopsetParams(n_final=50))
    assert h.size == 0 and h.levels == []


def test_rejects_fractional_weights():
    from estgraph.graph import build_graph

    g = build_graph([(0, 1, 1), (1, 2, 1.5)], 3)
    with pytest.raises(ValueError, match="integer"):
        hopset_build(g, P)


@pytest.mark.parametrize("seed", range(3))
def test_size_bounds_and_witnesses(seed):
    g = gnm_graph(2000, 8000, seed=seed)
    h = hopset_build(g, P, seed=seed)
    assert h.star_count <= g.n
    assert h.clique_count <= h.schedule.clique_bound()
    assert witness_mismatches(g, h) == 0
    for lv in h.levels:
        assert lv.beta == h.schedule.beta0 * h.schedule.growth ** lv.level


def test_weights_are_distances_within_witness():
    g = grid_graph(20, 20, weights=(1, 9), seed=3)
    h = hopset_build(g, HopsetParams(n_final=4), seed=5)
    assert h.size > 0
    d = all_pairs(g)
    # witness distances can only be longer than global ones
    assert (h.sw >= d[h.su.astype(int), h.sv.astype(int)]).all()
    assert witness_mismatches(g, h) == 0
    assert set(np.unique(h.kind).tolist()) <= {STAR, CLIQUE}


def test_shortcuts_preserve_distances():
    g = gnm_graph(800, 3200, weights=(1, 20), seed=8)
    h = hopset_build(g, HopsetParams(n_final=5), seed=1)
    aug = augment(g, h)
    for s in (0, 100, 500):
        assert (dijkstra(aug, s).dist == dijkstra(g, s).dist).all()


def test_hopset_reduces_hops_on_a_path():
    g = path_graph(400)
    h = hopset_build(g, HopsetParams(n_final=4, gamma2=0.5), seed=2)
    plain = hop_limited_search(g, 0, 399, 399)
    short = hop_limited_search(augment(g, h), 0, 399, 399)
    assert short.hops_to_reach(399) <= plain.hops_to_reach(399)


def test_determinism():
    g = gnm_graph(1000, 4000, seed=2)
    a = hopset_build(g, P, seed=11)
    b = hopset_build(g, P, seed=11)
    for x, y in zip(a.edge_arrays(), b.edge_arrays()):
        assert (x == y).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 120), st.integers(0, 400), st.integers(0, 2 ** 32))
def test_random_graphs_invariants(n, m, seed):
    g = gnm_graph(n, min(m, n * (n - 1) // 2), weights=(1, 6), seed=seed)
    h = hopset_build(g, HopsetParams(n_final=2), seed=seed)
    assert h.star_count <= g.n
    assert h.clique_count <= h.schedule.clique_bound()
    assert witness_mismatches(g, h) == 0
