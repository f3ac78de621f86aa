"""Independent oracles for the test suite.

These deliberately reimplement the checked operations with naive scans and
direct formula summation so they share no code paths with the library.
"""

from __future__ import annotations

import random
from fractions import Fraction

from letngen.core import Snapshot, TemporalNetwork, make_network


def brute_signature_string(network: TemporalNetwork, node_labels, ego: int,
                           t: int, k: int, codes) -> str:
    """Naive signature: scan raw edge sets for every candidate neighbor."""
    width = len(codes[0])
    parts = []
    for v in range(network.node_count):
        if v == ego:
            continue
        slots = []
        for s in range(t, t + k):
            pair = (min(ego, v), max(ego, v))
            if pair in network.snapshots[s].edges:
                slots.append(codes[node_labels[v]])
            else:
                slots.append("0" * width)
        joined = "".join(slots)
        if joined != "0" * (k * width):
            parts.append(joined)
    parts.sort()
    return "|".join([codes[node_labels[ego]], *parts])


def _mixing_matrix(edges, labels):
    """Exact normalized mixing matrix over observed labels, as Fractions."""
    edges = list(edges)
    m = len(edges)
    label_set = sorted({labels[u] for u, v in edges} | {labels[v] for u, v in edges})
    e = {(a, b): Fraction(0) for a in label_set for b in label_set}
    for u, v in edges:
        e[(labels[u], labels[v])] += Fraction(1, 2 * m)
        e[(labels[v], labels[u])] += Fraction(1, 2 * m)
    return e, label_set


def brute_modularity(edges, labels) -> float:
    """Direct summation over the exact normalized mixing matrix."""
    if not list(edges):
        return 0.0
    e, label_set = _mixing_matrix(edges, labels)
    q = Fraction(0)
    for a in label_set:
        a_marg = sum((e[(a, b)] for b in label_set), Fraction(0))
        q += e[(a, a)] - a_marg ** 2
    return float(q)


def brute_assortativity(edges, labels) -> float:
    if not list(edges):
        return 0.0
    e, label_set = _mixing_matrix(edges, labels)
    trace = sum((e[(a, a)] for a in label_set), Fraction(0))
    sum_ab = sum((sum((e[(a, b)] for b in label_set), Fraction(0)) ** 2
                  for a in label_set), Fraction(0))
    if sum_ab == 1:
        return 0.0
    return float((trace - sum_ab) / (1 - sum_ab))


def brute_clustering(edges) -> float:
    """Average local clustering via exhaustive triangle counting."""
    edges = set(edges)
    nodes = sorted({u for u, _ in edges} | {v for _, v in edges})
    if not nodes:
        return 0.0
    total = 0.0
    for u in nodes:
        nbrs = [w for w in nodes
                if w != u and ((min(u, w), max(u, w)) in edges)]
        d = len(nbrs)
        if d < 2:
            continue
        closed = 0
        for i in range(d):
            for j in range(i + 1, d):
                a, b = nbrs[i], nbrs[j]
                if (min(a, b), max(a, b)) in edges:
                    closed += 1
        total += 2 * closed / (d * (d - 1))
    return total / len(nodes)


def random_network(rng: random.Random, node_count: int, length: int,
                   density: float = 0.25, gap: int = 300,
                   t0: int = 0) -> TemporalNetwork:
    layers = []
    for _ in range(length):
        edges = [(u, v) for u in range(node_count)
                 for v in range(u + 1, node_count) if rng.random() < density]
        layers.append(edges)
    return make_network(layers, node_count, gap=gap, t0=t0)


def random_labels(rng: random.Random, node_count: int, label_count: int):
    # guarantee every label is inhabited
    labels = [rng.randrange(label_count) for _ in range(node_count)]
    for lab in range(min(label_count, node_count)):
        labels[lab] = lab
    return labels
