import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metasoc.errors import DisconnectedGraph
from metasoc.soc import (AdoptionConfig, AvalancheRecord, build_graph, mean_adoption_curve,
                         run_adoption, segment_avalanches)


def reference_adoption(config, shuffle_seed=0):
    """Same seed protocol, but cascades settle one node at a time in shuffled order."""
    rng = np.random.default_rng(config.seed)
    g = build_graph(config, int(rng.integers(0, 2**32)))
    order = random.Random(shuffle_seed)
    adopted = set()
    cumulative, cascades = [], []
    for _ in range(config.steps):
        added = 0
        if rng.random() < config.innovation_rate:
            rest = sorted(set(g) - adopted)
            if rest:
                adopted.add(rest[int(rng.integers(0, len(rest)))])
                changed = True
                while changed:
                    changed = False
                    nodes = sorted(set(g) - adopted)
                    order.shuffle(nodes)
                    for v in nodes:
                        nbrs = list(g[v])
                        k = sum(u in adopted for u in nbrs)
                        if k > 0 and k / len(nbrs) >= config.threshold_fraction:
                            adopted.add(v)
                            added += 1
                            changed = True
        cascades.append(added)
        cumulative.append(len(adopted))
    return cumulative, cascades


@pytest.mark.parametrize("topology, n", [("small_world", 60), ("scale_free", 60), ("grid", 49)])
@pytest.mark.parametrize("threshold", [0.0, 0.2, 0.34, 0.5])
def test_matches_the_reference(topology, n, threshold):
    config = AdoptionConfig(topology, n, threshold, 0.2, 150, seed=11)
    trace = run_adoption(config)
    for shuffle in (0, 1):
        cumulative, cascades = reference_adoption(config, shuffle)
        assert trace.cumulative.tolist() == cumulative
        assert trace.cascades.tolist() == cascades


def test_zero_threshold_takes_the_whole_component_at_once():
    config = AdoptionConfig("small_world", 200, 0.0, 0.05, 300, seed=4)
    trace = run_adoption(config)
    first = int(np.argmax(trace.innovations))
    assert trace.cumulative[first] == 200
    assert trace.avalanches[0] == AvalancheRecord(first + 1, 199, 1)
    assert trace.innovations.sum() == 1


def test_full_threshold_only_innovations_early_on():
    config = AdoptionConfig("small_world", 200, 1.0, 0.05, 200, seed=4)
    trace = run_adoption(config)
    assert trace.cascades.sum() == 0
    assert trace.avalanches == ()
    assert trace.cumulative.tolist() == np.cumsum(trace.innovations).tolist()


def test_full_threshold_needs_every_neighbour():
    # on a ring a node joins only once both neighbours have
    config = AdoptionConfig("small_world", 30, 1.0, 1.0, 30, seed=2, topology_params={"k": 2, "p": 0})
    trace = run_adoption(config)
    assert trace.cumulative[-1] == 30
    assert trace.cascades.sum() == 30 - trace.innovations.sum()


def test_trace_invariants():
    config = AdoptionConfig("scale_free", 150, 0.3, 0.05, 500, seed=21)
    trace = run_adoption(config)
    assert np.all(np.diff(trace.cumulative) >= 0)
    assert trace.cumulative[-1] <= 150
    assert trace.cumulative.tolist() == np.cumsum(trace.innovations + trace.cascades).tolist()
    assert sum(a.size for a in trace.avalanches) == trace.cascades.sum()
    lines = trace.to_csv().splitlines()
    assert lines[0] == "step,cumulative_adopters,innovations,cascade_adoptions"
    assert len(lines) == 501


def test_determinism():
    config = AdoptionConfig("small_world", 100, 0.25, 0.02, 400, seed=5)
    a, b = run_adoption(config), run_adoption(config)
    assert a.cumulative.tolist() == b.cumulative.tolist()
    assert a.avalanches == b.avalanches


def test_mean_curve():
    config = AdoptionConfig("small_world", 50, 0.25, 0.05, 100, seed=0)
    curve = mean_adoption_curve(config, range(4))
    assert curve.shape == (100,)
    assert np.all(np.diff(curve) >= 0)


def test_disconnected_small_world():
    config = AdoptionConfig("small_world", 40, 0.2, 0.1, 10, seed=0,
                            topology_params={"k": 2, "p": 0.9})
    seeds = range(50)
    outcomes = []
    for s in seeds:
        try:
            build_graph(config, s)
            outcomes.append(True)
        except DisconnectedGraph:
            outcomes.append(False)
    assert not all(outcomes)


def test_grid_shape():
    g = build_graph(AdoptionConfig("grid", 12, 0.1, 0.1, 1, seed=0, topology_params={"rows": 3}), 0)
    assert nx.is_isomorphic(g, nx.grid_2d_graph(3, 4))
    with pytest.raises(ValueError):
        build_graph(AdoptionConfig("grid", 10, 0.1, 0.1, 1, seed=0, topology_params={"rows": 3}), 0)


@pytest.mark.parametrize("kwargs", [dict(topology="ring"), dict(n_nodes=1),
                                    dict(threshold_fraction=1.5), dict(innovation_rate=-0.1),
                                    dict(steps=-1)])
def test_invalid_configs(kwargs):
    base = dict(topology="grid", n_nodes=16, threshold_fraction=0.5, innovation_rate=0.1,
                steps=10, seed=0)
    with pytest.raises(ValueError):
        AdoptionConfig(**{**base, **kwargs})


def test_segmentation():
    cascades = np.array([0, 2, 3, 0, 0, 1, 0, 4])
    assert segment_avalanches(cascades) == [AvalancheRecord(2, 5, 2), AvalancheRecord(6, 1, 1),
                                            AvalancheRecord(8, 4, 1)]
    assert segment_avalanches(np.zeros(5, dtype=int)) == []


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=40))
def test_segmentation_property(cascades):
    runs = segment_avalanches(np.array(cascades, dtype=int))
    assert sum(r.size for r in runs) == sum(cascades)
    covered = [t for r in runs for t in range(r.start_step, r.start_step + r.duration)]
    assert covered == [t for t, k in enumerate(cascades, 1) if k > 0]
    # maximal: runs never touch
    assert all(a.start_step + a.duration < b.start_step for a, b in zip(runs, runs[1:]))
