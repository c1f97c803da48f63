from __future__ import annotations

import json

import numpy as np
import pytest

from estgraph.graph import build_graph
from estgraph.harness.generators import gnm_graph, grid_graph
from estgraph.hopset import HopsetParams
from estgraph.hopset.oracle import (
    OracleIndex,
    build_oracle,
    distance_scales,
    index_from_dict,
    query_many,
    query_oracle,
)
from estgraph.sssp import UNREACHABLE, dijkstra


@pytest.fixture(scope="module")
def weighted():
    g = gnm_graph(300, 1200, weights=(1, 1e6), seed=2)
    return g, build_oracle(g, 0.25, p=HopsetParams(epsilon=0.25, weighted=True, seed=3))


def test_validation():
    g = build_graph([(0, 1)], 2)
    with pytest.raises(ValueError):
        build_oracle(g, 0.0)
    with pytest.raises(ValueError):
        build_oracle(g, 0.5, eta=1.0)


def test_same_vertex_and_single_edge():
    g = build_graph([(0, 1, 7)], 2, normalize=False)
    o = build_oracle(g, 0.5)
    assert query_oracle(o, 1, 1).value == 0.0
    r = query_oracle(o, 0, 1)
    assert r.value >= 7 and r.value <= 7 * 1.5


def test_disconnected_pair():
    g = build_graph([(0, 1), (2, 3)], 4)
    assert query_oracle(build_oracle(g, 0.5), 0, 2).value is UNREACHABLE


def test_tiny_graph_has_no_shortcuts():
    # n_final never drops below 2, so a single edge needs no hopset
    g = build_graph([(0, 1)], 2)
    assert build_oracle(g, 0.5).shortcut_count() == 0


def test_uniform_weights_one_bundle_per_repetition_and_scale():
    g = gnm_graph(200, 800, seed=1)
    p = HopsetParams(epsilon=0.5, weighted=True, repetitions=4)
    o = build_oracle(g, 0.5, p=p)
    qg = o.decomposition.query_graphs[0]
    assert len(o.bundles) == 4 * len(distance_scales(qg, g.n, o.eta))
    assert {b.repetition for b in o.bundles} == set(range(4))


def test_answers_within_distortion(weighted):
    g, o = weighted
    rng = np.random.default_rng(0)
    pairs = [tuple(int(x) for x in rng.choice(g.n, 2, replace=False)) for _ in range(60)]
    res = query_many(o, pairs, cache=True)
    for (s, t), r in zip(pairs, res):
        d = dijkstra(g, s).dist[t]
        assert r.value >= d * (1 - 1e-9)
        assert r.value <= (1 + o.epsilon) * d


def test_repetition_filter_never_beats_all(weighted):
    g, o = weighted
    pairs = [(0, 50), (3, 299), (17, 200)]
    full = query_many(o, pairs)
    one = query_many(o, pairs, repetitions={0})
    for a, b in zip(full, one):
        assert a.value <= b.value


def test_save_load_roundtrip(weighted, tmp_path):
    g, o = weighted
    p = tmp_path / "idx.json"
    o.save(p)
    back = OracleIndex.load(p, g)
    pairs = [(0, 10), (5, 250), (42, 43)]
    assert [r.value for r in query_many(o, pairs)] == [r.value for r in query_many(back, pairs)]
    assert back.shortcut_count() == o.shortcut_count()


def test_fingerprint_mismatch(weighted):
    g, o = weighted
    other = grid_graph(10, 30, weights=(1, 5), seed=0)
    with pytest.raises(ValueError, match="different graph"):
        index_from_dict(json.loads(json.dumps(o.to_dict())), other)
    with pytest.raises(ValueError, match="supported version"):
        index_from_dict({"format": "x"}, g)


def test_build_is_deterministic():
    g = gnm_graph(150, 600, weights=(1, 100), seed=5)
    a = build_oracle(g, 0.5).to_dict()
    b = build_oracle(g, 0.5).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
