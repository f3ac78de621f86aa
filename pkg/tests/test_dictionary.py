import random

import pytest

from letngen.core import LabelAssignment, SplitConfig, make_network
from letngen.dictionary import (build_table, load_table, save_table,
                                split_meta_for, table_stats, train_table)
from letngen.signature import (CensusRecord, MaskedKey, build_encoding,
                               signature_census)


def small_cfg():
    return SplitConfig(local_split=300, global_split=600, origin=0)


def toy_table():
    """5-node, 6-snapshot network counted by hand.

    Nodes 0-1 share an edge in every snapshot; node 2 joins (0,2) only in
    snapshots 2 and 5. With k=2, gap=300 and a 2-split day, ego 0's windows
    alternate between splits.
    """
    layers = [[(0, 1)], [(0, 1)], [(0, 1), (0, 2)],
              [(0, 1)], [(0, 1)], [(0, 1), (0, 2)]]
    net = make_network(layers, 5)
    labels = LabelAssignment.uniform(5)
    return net, labels, train_table(net, labels, 2, small_cfg())


def test_build_counts_match_hand_count():
    """Every (split, key, extension) count verified by hand.

    Splits alternate with snapshot parity; the split of a window is that of
    its last snapshot. Counting all 25 (ego, window) records gives:
    """
    net, labels, table = toy_table()
    s0, s1 = table.counts[0], table.counts[1]
    assert s1["1|1x"] == {"1;": 4, "0;": 1, "1;1:1": 1}
    assert s1["1|1x|1x"] == {"0|1;": 1}
    assert s1["1"] == {";": 7, ";1:1": 1}
    assert s0["1|1x"] == {"1;": 3, "1;1:1": 1}
    assert s0["1"] == {";": 5, ";1:1": 1}
    total = sum(sum(v.values()) for m in (s0, s1) for v in m.values())
    assert total == 25  # 5 egos x 5 windows


def test_probability_from_counts():
    net, labels, table = toy_table()
    # split 0, key "1|1x": counts {"1;": 3, "1;1:1": 1} -> P("1;") = 0.75
    rng = random.Random(11)
    key = MaskedKey("1", ("1x",))
    draws = [table.sample_extension(0, key, rng).render() for _ in range(10000)]
    freq = draws.count("1;") / len(draws)
    assert abs(freq - 0.75) < 0.02


def test_hand_built_three_to_one_distribution():
    cfg = small_cfg()
    labels = LabelAssignment.uniform(2)
    meta = split_meta_for(labels, cfg)
    records = [CensusRecord(0, "1|1x", "1;")] * 3 + [CensusRecord(0, "1|1x", "0;")]
    table = build_table(records, 2, 300, cfg, meta)
    rng = random.Random(0)
    key = MaskedKey("1", ("1x",))
    draws = [table.sample_extension(0, key, rng).render() for _ in range(10000)]
    assert abs(draws.count("1;") / 10000 - 0.75) < 0.02


def test_single_extension_probability_one():
    cfg = small_cfg()
    labels = LabelAssignment.uniform(2)
    table = build_table([CensusRecord(0, "1|1x", "1;")], 2, 300, cfg,
                        split_meta_for(labels, cfg))
    rng = random.Random(5)
    key = MaskedKey("1", ("1x",))
    for _ in range(50):
        assert table.sample_extension(0, key, rng).render() == "1;"


def test_missing_key_falls_back_to_empty_extension():
    cfg = small_cfg()
    labels = LabelAssignment.uniform(2)
    table = build_table([], 2, 300, cfg, split_meta_for(labels, cfg))
    rng = random.Random(1)
    ext = table.sample_extension(0, MaskedKey("1", ("1x", "1x")), rng)
    assert ext.slots == ("0", "0")
    assert ext.new_neighbor_counts == ()
    assert ext.is_empty
    assert table.fallbacks == 1


def test_build_determinism_under_stream_permutation():
    net, labels, _ = toy_table()
    cfg = small_cfg()
    records = list(signature_census(net, labels, 2, cfg))
    meta = split_meta_for(labels, cfg)
    base = build_table(records, 2, 300, cfg, meta)
    for seed in range(5):
        shuffled = records[:]
        random.Random(seed).shuffle(shuffled)
        table = build_table(shuffled, 2, 300, cfg, meta)
        assert table.counts == base.counts


def test_split_isolation():
    cfg = small_cfg()
    labels = LabelAssignment.uniform(2)
    records = [CensusRecord(0, "1|1x", "1;"), CensusRecord(1, "1|1x", "0;")]
    table = build_table(records, 2, 300, cfg, split_meta_for(labels, cfg))
    rng = random.Random(3)
    key = MaskedKey("1", ("1x",))
    assert all(table.sample_extension(0, key, rng).render() == "1;"
               for _ in range(20))
    assert all(table.sample_extension(1, key, rng).render() == "0;"
               for _ in range(20))


def test_inconsistent_record_width_rejected():
    cfg = small_cfg()
    labels = LabelAssignment.uniform(2)  # width 1
    with pytest.raises(ValueError):
        build_table([CensusRecord(0, "01|0101x", "01;")], 2, 300, cfg,
                    split_meta_for(labels, cfg))


def test_stats_empty_and_single():
    cfg = small_cfg()
    labels = LabelAssignment.uniform(2)
    empty = build_table([], 2, 300, cfg, split_meta_for(labels, cfg))
    s = table_stats(empty)
    assert s["total_keys"] == 0 and s["total_observations"] == 0
    one = build_table([CensusRecord(0, "1", ";")], 2, 300, cfg,
                      split_meta_for(labels, cfg))
    s = table_stats(one)
    assert s["total_keys"] == 1 and s["total_extensions"] == 1


def test_stats_match_independent_recount():
    net, labels, table = toy_table()
    records = list(signature_census(net, labels, 2, small_cfg()))
    s = table_stats(table)
    assert s["total_observations"] == len(records)
    assert s["total_keys"] == len({(r.split, r.key) for r in records})
    assert s["total_extensions"] == len({(r.split, r.key, r.extension)
                                         for r in records})


def test_save_load_round_trip_bit_exact(tmp_path):
    net, labels, table = toy_table()
    for name in ("table.json", "table.json.gz"):
        path = tmp_path / name
        save_table(table, path)
        loaded = load_table(path)
        assert loaded.counts == table.counts
        assert loaded.split_meta == table.split_meta
        assert loaded.k == table.k and loaded.gap == table.gap
        assert loaded.split_config == table.split_config
        # serialization itself is stable
        save_table(loaded, tmp_path / ("re_" + name))
        a = (tmp_path / name).read_bytes()
        b = (tmp_path / ("re_" + name)).read_bytes()
        if not name.endswith(".gz"):
            assert a == b


def test_load_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text('{"format": "something-else"}')
    with pytest.raises(ValueError):
        load_table(path)
