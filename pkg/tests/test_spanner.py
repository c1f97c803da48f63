from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from estgraph.graph import build_graph, connected_components, edge_subgraph
from estgraph.harness.generators import cycle_graph, gnm_graph, path_graph
from estgraph.spanner import (
    FOREST,
    Spanner,
    SpannerParams,
    build_spanner,
    edge_stretch,
    forest_is_acyclic,
    same_components,
    split_groups,
    unweighted_spanner,
    weighted_spanner,
    well_separated_spanner,
)
from estgraph.sssp import all_pairs


def random_tree(n, seed):
    rng = np.random.default_rng(seed)
    return build_graph([(v, int(rng.integers(v))) for v in range(1, n)], n)


def structural_ok(g, sp):
    dmax = sp.levels[0].max_diameter if sp.levels else 0
    return (edge_stretch(g, sp) <= 2 * dmax + 1).all()


def test_params():
    p = SpannerParams(k=4)
    assert p.beta(2000) == pytest.approx(np.log(2000) / 8)
    assert SpannerParams(k=1).beta(2000) == 0.99
    assert p.groups == 6 and p.separation == 64
    with pytest.raises(ValueError):
        SpannerParams(k=0)


@pytest.mark.parametrize("seed", range(5))
def test_tree_is_its_own_spanner(seed):
    g = random_tree(100, seed)
    sp = unweighted_spanner(g, SpannerParams(k=3, seed=seed))
    assert sp.edge_ids.tolist() == list(range(g.m))
    assert (edge_stretch(g, sp) == 1).all()


def test_edgeless_graph():
    g = build_graph([], 5)
    sp = build_spanner(g, SpannerParams(k=2))
    assert sp.size == 0


def test_weighted_input_rejected():
    g = build_graph([(0, 1, 1), (1, 2, 3)], 3)
    with pytest.raises(ValueError, match="use weighted_spanner"):
        unweighted_spanner(g, SpannerParams(k=2))


def test_cycle_structural_stretch_every_seed():
    g = cycle_graph(20)
    for seed in range(50):
        sp = unweighted_spanner(g, SpannerParams(k=2, seed=seed))
        d = all_pairs(sp.graph(g))
        dmax = sp.levels[0].max_diameter
        assert all(d[u, v] <= 2 * dmax + 1 for u, v, _ in g.edges())


def test_single_bucket_reduces_to_unweighted():
    g = gnm_graph(200, 800, seed=2)
    p = SpannerParams(k=3, seed=7)
    a = unweighted_spanner(g, p)
    b = well_separated_spanner(g, [np.arange(g.m)], p)
    assert a.edge_ids.tolist() == b.edge_ids.tolist()


def test_separation_violation():
    g = build_graph([(0, 1, 1), (1, 2, 3), (2, 3, 4)], 4)
    with pytest.raises(ValueError, match="not well separated"):
        well_separated_spanner(g, [[0], [1]], SpannerParams(k=2))
    with pytest.raises(ValueError, match="not well separated"):
        # weights 3 and 4 straddle a power of two
        well_separated_spanner(g, [[1, 2]], SpannerParams(k=2))


def test_second_level_fully_contracted():
    # bucket 1 spans everything, so the heavy bucket sees a single quotient vertex
    g = build_graph([(0, 1, 1), (1, 2, 1), (0, 2, 100)], 3)
    light = [e for e in range(g.m) if g.ew[e] == 1]
    heavy = [e for e in range(g.m) if g.ew[e] == 100]
    sp = well_separated_spanner(g, [light, heavy], SpannerParams(k=2, seed=0))
    assert sp.levels[1].quotient_n == 1
    assert sp.levels[1].forest_edges == 0 and sp.levels[1].inter_edges == 0


def test_well_separated_path_keeps_all_edges():
    k = 2
    g = build_graph([(0, 1, 1), (1, 2, 1), (2, 3, k ** 3), (3, 4, k ** 3)], 5)
    light = np.nonzero(g.ew == 1)[0]
    heavy = np.nonzero(g.ew == k ** 3)[0]
    sp = well_separated_spanner(g, [light, heavy], SpannerParams(k=k, seed=3))
    assert sp.size == g.m
    assert (edge_stretch(g, sp) == 1).all()


def test_split_groups_spacing():
    g = build_graph([(i, i + 1, 2 ** i) for i in range(20)], 21)
    p = SpannerParams(k=2, c_spacing=3)
    groups = split_groups(g, p)
    assert len(groups) == 3
    for grp in groups:
        ids = [i for i, _ in grp]
        assert all(b - a == 3 for a, b in zip(ids, ids[1:]))


def test_unit_weights_weighted_equals_unweighted():
    g = gnm_graph(150, 600, seed=4)
    p = SpannerParams(k=3, seed=1)
    assert weighted_spanner(g, p).edge_ids.tolist() == unweighted_spanner(g, p).edge_ids.tolist()


def test_k1_is_valid():
    g = gnm_graph(100, 400, weights=(1, 100), seed=5)
    sp = weighted_spanner(g, SpannerParams(k=1, seed=0))
    assert same_components(g, sp)


def test_weighted_certified_bounds_hold():
    g = gnm_graph(500, 2000, weights=(1, 2 ** 16), seed=6)
    for seed in range(20):
        sp = weighted_spanner(g, SpannerParams(k=3, seed=seed))
        ids = np.random.default_rng(seed).choice(g.m, 100, replace=False)
        st = edge_stretch(g, sp, ids) * g.ew[ids]
        assert all(st[i] <= sp.bound_for(g, e) for i, e in enumerate(ids))
        assert same_components(g, sp)
        assert forest_is_acyclic(g, sp)


def test_level_quotients_expand_to_connected_pieces():
    g = gnm_graph(300, 1500, weights=(1, 2 ** 12), seed=8)
    p = SpannerParams(k=2, seed=2)
    for j, grp in enumerate(split_groups(g, p)):
        if not grp:
            continue
        ids = [i for i, _ in grp]
        trace = []
        sp = well_separated_spanner(g, [b for _, b in grp], p, group=j, bucket_ids=ids, trace=trace)
        forest = [e for e, k in sp.kind.items() if k == FOREST]
        for level, (labels, qg, _) in enumerate(trace):
            # each quotient vertex is spanned by forest edges of the earlier levels
            earlier = [e for e in forest if sp.bucket[e] in ids[:level]]
            lab = connected_components(edge_subgraph(g, earlier).graph)
            for members in qg.members():
                assert len(set(lab[members].tolist())) == 1


def test_serialization_roundtrip():
    g = gnm_graph(100, 300, weights=(1, 1000), seed=1)
    sp = weighted_spanner(g, SpannerParams(k=2, seed=4))
    back = Spanner.from_dict(json.loads(sp.to_json()))
    assert back.edge_ids.tolist() == sp.edge_ids.tolist()
    assert back.kind == sp.kind
    assert sp.to_text().splitlines()[0].startswith("# spanner")


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 80), st.integers(0, 300), st.integers(1, 5), st.integers(0, 2 ** 32))
def test_unweighted_invariants(n, m, k, seed):
    g = gnm_graph(n, min(m, n * (n - 1) // 2), seed=seed)
    sp = unweighted_spanner(g, SpannerParams(k=k, seed=seed))
    assert set(sp.edge_ids.tolist()) <= set(range(g.m))
    assert same_components(g, sp)
    if g.m:
        assert structural_ok(g, sp)


def test_path_keeps_every_edge():
    g = path_graph(50)
    assert unweighted_spanner(g, SpannerParams(k=2)).size == 49
