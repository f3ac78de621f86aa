import random

import pytest

from letngen.core import LabelAssignment, SplitConfig, make_network
from letngen.signature import (Extension, build_encoding, extract_signature,
                               mask_signature, signature_census, unmask)

from helpers import brute_signature_string, random_labels, random_network


def test_build_encoding_widths_and_codes():
    enc = build_encoding(3)
    assert enc.width == 2
    assert enc.codes == ("01", "10", "11")
    assert build_encoding(1).codes == ("1",)   # unlabeled degenerate case
    assert build_encoding(9).width == 4
    assert build_encoding(15).width == 4
    assert build_encoding(16).width == 5
    with pytest.raises(ValueError):
        build_encoding(0)


def test_encoding_reserves_all_zero():
    for count in (1, 2, 3, 7, 9):
        enc = build_encoding(count)
        assert enc.zero not in enc.codes
        assert len(set(enc.codes)) == count
        for i, code in enumerate(enc.codes):
            assert enc.label_of_code(code) == i


def test_worked_example_three_snapshot_window():
    # ego label code 11; neighbor X (code 01) linked in snapshots 2 and 3,
    # neighbor Y (code 10) linked in all three
    labels = LabelAssignment.static([2, 0, 1], ["a", "b", "c"])
    ego, x, y = 0, 1, 2
    net = make_network([[(ego, y)], [(ego, x), (ego, y)], [(ego, x), (ego, y)]], 3)
    enc = build_encoding(3)
    sig = extract_signature(net, labels, ego, 0, 3, enc)
    assert sig.render() == "11|000101|101010"
    key, ext = mask_signature(sig)
    assert key.render() == "11|0001x|1010x"
    assert ext.slots == ("01", "10")
    assert ext.new_neighbor_counts == ()


def test_isolated_ego_has_empty_signature():
    labels = LabelAssignment.static([0, 1], ["a", "b"])
    net = make_network([[], []], 2)
    enc = build_encoding(2)
    sig = extract_signature(net, labels, 0, 0, 2, enc)
    assert sig.neighbor_sigs == ()
    assert sig.render() == "01"
    key, ext = mask_signature(sig)
    assert key.render() == "01"
    assert ext == Extension((), ())


def test_window_out_of_range():
    net = make_network([[], []], 2)
    labels = LabelAssignment.uniform(2)
    enc = build_encoding(1)
    with pytest.raises(ValueError):
        extract_signature(net, labels, 0, 1, 2, enc)


def test_new_neighbor_goes_to_counts_not_key():
    # neighbor present only in the last snapshot of a k=3 window
    labels = LabelAssignment.static([0, 2], ["a", "b", "c"])
    net = make_network([[], [], [(0, 1)]], 2)
    enc = build_encoding(3)
    sig = extract_signature(net, labels, 0, 0, 3, enc)
    assert sig.neighbor_sigs == ("000011",)
    key, ext = mask_signature(sig)
    assert key.masked_neighbor_sigs == ()
    assert ext.slots == ()
    assert ext.new_neighbor_counts == (("11", 1),)


def test_signature_matches_brute_force_enumeration():
    """Library signatures equal an exhaustive naive scan on random inputs."""
    rng = random.Random(42)
    for trial in range(60):
        n = rng.randrange(2, 8)
        t_len = rng.randrange(2, 8)
        k = rng.randrange(2, min(4, t_len) + 1)
        label_count = rng.randrange(1, 4)
        net = random_network(rng, n, t_len, density=0.3)
        node_labels = random_labels(rng, n, label_count)
        labels = LabelAssignment.static(node_labels,
                                        [f"l{i}" for i in range(label_count)])
        enc = build_encoding(label_count)
        for t in range(t_len - k + 1):
            for ego in range(n):
                got = extract_signature(net, labels, ego, t, k, enc).render()
                want = brute_signature_string(net, node_labels, ego, t, k,
                                              enc.codes)
                assert got == want


def test_mask_unmask_round_trip():
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randrange(2, 7)
        k = rng.randrange(2, 5)
        label_count = rng.randrange(1, 4)
        net = random_network(rng, n, k, density=0.35)
        node_labels = random_labels(rng, n, label_count)
        labels = LabelAssignment.static(node_labels,
                                        [f"l{i}" for i in range(label_count)])
        enc = build_encoding(label_count)
        ego = rng.randrange(n)
        sig = extract_signature(net, labels, ego, 0, k, enc)
        key, ext = mask_signature(sig)
        assert unmask(key, ext, k) == sig


def test_extension_render_parse_round_trip():
    cases = [
        Extension((), ()),
        Extension(("01", "00"), ()),
        Extension((), (("10", 2), ("11", 1))),
        Extension(("11",), (("01", 3),)),
    ]
    for ext in cases:
        assert Extension.parse(ext.render()) == ext


def test_sorting_canonicality_under_node_permutation():
    """Permuting neighbors with equal label and link pattern changes nothing."""
    labels = LabelAssignment.static([0, 1, 1], ["a", "b"])
    enc = build_encoding(2)
    net1 = make_network([[(0, 1)], [(0, 2)]], 3)
    net2 = make_network([[(0, 2)], [(0, 1)]], 3)
    s1 = extract_signature(net1, labels, 0, 0, 2, enc)
    s2 = extract_signature(net2, labels, 0, 0, 2, enc)
    assert s1 == s2


def test_etn_degeneration_presence_bits():
    """Single-label signatures are bit-identical to presence-bit strings."""
    rng = random.Random(5)
    net = random_network(rng, 5, 4, density=0.4)
    labels = LabelAssignment.uniform(5)
    enc = build_encoding(1)
    assert enc.codes == ("1",)
    for ego in range(5):
        sig = extract_signature(net, labels, ego, 0, 3, enc)
        for ns in sig.neighbor_sigs:
            assert set(ns) <= {"0", "1"}
        want = brute_signature_string(net, [0] * 5, ego, 0, 3, ("1",))
        assert sig.render() == want


def test_census_record_counts():
    cfg = SplitConfig(local_split=300, global_split=600, origin=0)
    labels = LabelAssignment.uniform(3)
    net_one = make_network([[(0, 1)], [(1, 2)]], 3)        # T == k
    assert len(list(signature_census(net_one, labels, 2, cfg))) == 3
    net_two = make_network([[(0, 1)], [(1, 2)], []], 3)    # T == k + 1
    assert len(list(signature_census(net_two, labels, 2, cfg))) == 6


def test_census_split_is_last_snapshot_and_periodic():
    """A pattern at the same hour on two days lands in the same split."""
    day = 86400
    layers = [[] for _ in range(2 * 24)]
    layers[3] = [(0, 1)]
    layers[4] = [(0, 1)]
    layers[24 + 3] = [(0, 1)]
    layers[24 + 4] = [(0, 1)]
    net = make_network(layers, 2, gap=3600)
    cfg = SplitConfig(local_split=3600, global_split=day, origin=0)
    labels = LabelAssignment.uniform(2)
    records = [r for r in signature_census(net, labels, 2, cfg)
               if "1" in r.key or "1" in r.extension]
    # the (kept-neighbor) pattern windows end at hour 4 on both days
    full = [r for r in records if r.key == "1|1x" and r.extension == "1;"]
    assert len(full) == 4  # both egos, both days
    assert {r.split for r in full} == {4}


def test_census_rejects_short_network():
    net = make_network([[(0, 1)]], 2)
    cfg = SplitConfig(local_split=300, global_split=600)
    with pytest.raises(ValueError):
        list(signature_census(net, LabelAssignment.uniform(2), 2, cfg))
