from __future__ import annotations

import numpy as np
import pytest

from estgraph.harness.generators import cycle_graph, gnm_graph, path_graph
from estgraph.hopset.lowdepth import hops_needed, low_depth_hopset
from estgraph.sssp import all_pairs, dijkstra, hop_limited_search


def test_validation():
    g = path_graph(10)
    with pytest.raises(ValueError):
        low_depth_hopset(g, 1.0, 0.5)
    with pytest.raises(ValueError):
        low_depth_hopset(g, 0.5, 0.0)


def test_round_count_default():
    h = low_depth_hopset(path_graph(30), 0.5, 0.5, seed=1)
    assert len(h.rounds) == 4
    assert h.eta == 0.25
    assert h.hop_target == pytest.approx(30 ** 0.5)


@pytest.fixture(scope="module")
def cycle_hopset():
    g = cycle_graph(400)
    return g, low_depth_hopset(g, 0.5, 0.5, seed=3)


def test_shortcuts_never_undercut(cycle_hopset):
    g, h = cycle_hopset
    d = all_pairs(g)
    assert (h.sw >= d[h.su, h.sv] - 1e-9).all()
    work = h.working_graph(g)
    for s in (0, 133):
        assert (dijkstra(work, s).dist >= dijkstra(g, s).dist - 1e-9).all()


def test_rounds_never_increase_hops(cycle_hopset):
    g, h = cycle_hopset
    rng = np.random.default_rng(0)
    pairs = [tuple(int(x) for x in rng.choice(g.n, 2, replace=False)) for _ in range(20)]
    exact = np.array([dijkstra(g, s).dist[t] for s, t in pairs])
    factor = 1 + h.eps_total
    prev = None
    for r in [-1] + list(range(len(h.rounds))):
        work = g if r < 0 else h.working_graph(g, r)
        cur = hops_needed(work, pairs, exact, factor, g.n - 1)
        assert (cur >= 1).all()
        if prev is not None:
            assert (cur <= prev).all()
        prev = cur


def test_weighted_graph_distances_preserved():
    g = gnm_graph(300, 900, weights=(1, 50), seed=7)
    h = low_depth_hopset(g, 0.6, 0.5, seed=2, rounds=2)
    work = h.working_graph(g)
    for s in (0, 150):
        a = hop_limited_search(work, s, g.n - 1).dist
        assert (a >= dijkstra(g, s).dist - 1e-9).all()


def test_deterministic():
    g = path_graph(200)
    a = low_depth_hopset(g, 0.5, 0.5, seed=9)
    b = low_depth_hopset(g, 0.5, 0.5, seed=9)
    assert (a.su == b.su).all() and (a.sw == b.sw).all()
