import random

import pytest

from letngen.core import (LabelAssignment, Snapshot, SplitConfig,
                          TemporalNetwork, aggregate, aggregate_split,
                          local_split_of, make_network)

from helpers import random_network


def test_snapshot_rejects_self_loops():
    with pytest.raises(ValueError):
        Snapshot(frozenset({(2, 2)}), 0, 0)


def test_snapshot_rejects_non_canonical_pairs():
    with pytest.raises(ValueError):
        Snapshot(frozenset({(3, 1)}), 0, 0)


def test_network_validates_node_range_and_times():
    with pytest.raises(ValueError):
        make_network([[(0, 5)]], 3)
    snaps = (Snapshot(frozenset(), 0, 0), Snapshot(frozenset(), 1, 999))
    with pytest.raises(ValueError):
        TemporalNetwork(snaps, 2, gap=300)


def test_aggregate_counts_occurrences():
    net = make_network([[(0, 1)], [(0, 1), (1, 2)], [], [(0, 1)], [(1, 2)]], 3)
    g = aggregate(net)
    assert g.weights == {(0, 1): 3, (1, 2): 2}


def test_aggregate_empty_network_and_empty_range():
    net = make_network([[], []], 3)
    assert aggregate(net).weights == {}
    assert aggregate(net, 1, 1).weights == {}


def test_aggregate_additive_over_disjoint_ranges():
    rng = random.Random(7)
    net = random_network(rng, 6, 9)
    for b in range(10):
        left = aggregate(net, 0, b).weights
        right = aggregate(net, b, 9).weights
        merged = dict(left)
        for e, w in right.items():
            merged[e] = merged.get(e, 0) + w
        assert merged == aggregate(net, 0, 9).weights


def test_local_split_phase_zero_and_periodicity():
    cfg = SplitConfig(local_split=3600, global_split=86400, origin=500 * 86400)
    origin = cfg.origin
    assert local_split_of(origin, cfg) == 0
    assert local_split_of(origin + 86400 + 3600, cfg) == 1
    assert local_split_of(origin + 7200 - 1, cfg) == 1
    rng = random.Random(3)
    for _ in range(200):
        t = origin + rng.randrange(-10 * 86400, 10 * 86400)
        assert local_split_of(t, cfg) == local_split_of(t + 86400, cfg)
        assert 0 <= local_split_of(t, cfg) < cfg.splits_per_global


def test_split_config_invariants():
    with pytest.raises(ValueError):
        SplitConfig(local_split=3600, global_split=5000)
    cfg = SplitConfig(local_split=600, global_split=1200)
    with pytest.raises(ValueError):
        cfg.validate_for(gap=700)
    cfg.validate_for(gap=300)


def test_split_config_aligned_origin():
    cfg = SplitConfig.aligned(3 * 86400 + 12345)
    assert cfg.origin == 3 * 86400


def test_aggregate_split_pools_across_days():
    # one edge at hour 2 of both days, another at hour 5 of day 1 only
    layers = [[] for _ in range(2 * 24)]
    layers[2] = [(0, 1)]
    layers[5] = [(1, 2)]
    layers[24 + 2] = [(0, 1)]
    net = make_network(layers, 3, gap=3600)
    cfg = SplitConfig(local_split=3600, global_split=86400, origin=0)
    assert aggregate_split(net, cfg, 2).weights == {(0, 1): 2}
    assert aggregate_split(net, cfg, 5).weights == {(1, 2): 1}
    assert aggregate_split(net, cfg, 9).weights == {}


def test_label_assignment_modes():
    static = LabelAssignment.static([0, 1, 0], ["a", "b"])
    assert static.for_split(5) == ((0, 1, 0), ("a", "b"))
    per = LabelAssignment.per_split([[0, 0, 1], [1, 0, 0]],
                                    [["x", "y"], ["p", "q"]])
    assert per.for_split(1)[0] == (1, 0, 0)
    with pytest.raises(ValueError):
        per.for_split(2)
    with pytest.raises(ValueError):
        LabelAssignment.static([0, 3], ["a", "b"])


def test_uniform_labels_single_label():
    u = LabelAssignment.uniform(4)
    assert u.label_count() == 1
    assert u.for_split(0)[0] == (0, 0, 0, 0)
