"""Label assignments from community structure when metadata is absent.

Two strategies, both built on an in-repo Louvain optimizer of weighted
modularity:

* aggregated labels: one partition of the whole-period aggregated network,
  giving a static assignment;
* per-split labels: one partition per local split (aggregating the snapshots
  of that split across global splits), useful when communities change during
  the day, e.g. classes versus breaks.

Community indices are sorted by descending size before becoming labels so
that label identity is stable across reruns; isolated nodes are merged into
one trailing "isolated" label to avoid label-count blowup from inactive
participants.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (LabelAssignment, SplitConfig, TemporalNetwork,
                   WeightedStaticGraph, aggregate, aggregate_split)
from .rng import child_rng


@dataclass(frozen=True)
class Partition:
    """Node -> community map with contiguous community indices."""

    community: tuple[int, ...]
    community_count: int

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.community_count)]
        for node, c in enumerate(self.community):
            out[c].append(node)
        return out


def louvain(graph: WeightedStaticGraph, rng: random.Random,
            resolution: float = 1.0) -> Partition:
    """Louvain local optimum of weighted modularity.

    Alternates greedy single-node moves with graph aggregation until no move
    improves modularity. Node visit order is shuffled once per level with
    ``rng``, so the result is deterministic given the seed. Nodes with zero
    strength never move and end up in singleton communities.
    """
    n = graph.node_count
    if n == 0:
        return Partition((), 0)
    adj = graph.adjacency()
    loops = [0.0] * n
    membership = list(range(n))  # original node -> current-level community
    while True:
        node2com, moved = _one_level(adj, loops, rng, resolution)
        if not moved:
            break
        node2com = _renumber(node2com)
        membership = [node2com[c] for c in membership]
        adj, loops = _induced_graph(adj, loops, node2com)
    return Partition(tuple(_renumber(membership)), max(membership) + 1)


def _one_level(adj: list[dict[int, float]], loops: list[float],
               rng: random.Random, resolution: float) -> tuple[list[int], bool]:
    n = len(adj)
    strength = [sum(nbrs.values()) + 2.0 * loops[u] for u, nbrs in enumerate(adj)]
    two_m = sum(strength)
    node2com = list(range(n))
    if two_m == 0.0:
        return node2com, False
    com_tot = strength[:]
    order = list(range(n))
    rng.shuffle(order)
    any_move = False
    while True:
        pass_moves = 0
        for u in order:
            cu = node2com[u]
            s_u = strength[u]
            # weight from u to each neighboring community
            neigh_w: dict[int, float] = {}
            for v, w in adj[u].items():
                if v != u:
                    c = node2com[v]
                    neigh_w[c] = neigh_w.get(c, 0.0) + w
            com_tot[cu] -= s_u
            # score(c) = k_{u,c} - resolution * Sigma_tot(c) * s_u / 2m;
            # staying in cu is the baseline to beat strictly
            base = neigh_w.get(cu, 0.0) - resolution * com_tot[cu] * s_u / two_m
            best_c, best_score = cu, base
            for c in sorted(neigh_w):
                if c == cu:
                    continue
                score = neigh_w[c] - resolution * com_tot[c] * s_u / two_m
                if score > best_score:
                    best_c, best_score = c, score
            com_tot[best_c] += s_u
            if best_c != cu:
                node2com[u] = best_c
                pass_moves += 1
        if pass_moves == 0:
            break
        any_move = True
    return node2com, any_move


def _renumber(assignment: list[int]) -> list[int]:
    seen: dict[int, int] = {}
    out = []
    for c in assignment:
        if c not in seen:
            seen[c] = len(seen)
        out.append(seen[c])
    return out


def _induced_graph(adj: list[dict[int, float]], loops: list[float],
                   node2com: list[int]) -> tuple[list[dict[int, float]], list[float]]:
    n_com = max(node2com) + 1
    new_adj: list[dict[int, float]] = [dict() for _ in range(n_com)]
    new_loops = [0.0] * n_com
    for u, nbrs in enumerate(adj):
        cu = node2com[u]
        new_loops[cu] += loops[u]
        for v, w in nbrs.items():
            if v < u:
                continue  # each undirected edge once
            cv = node2com[v]
            if cu == cv:
                new_loops[cu] += w
            else:
                new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
                new_adj[cv][cu] = new_adj[cv].get(cu, 0.0) + w
    return new_adj, new_loops


def partition_to_labels(partition: Partition, graph: WeightedStaticGraph,
                        ) -> tuple[tuple[int, ...], tuple[str, ...]]:
    """Turn a partition into stable label indices.

    Communities of active nodes are ordered by descending size (ties by
    smallest member) and named c0, c1, ...; all isolated nodes collapse into
    one trailing "isolated" label.
    """
    strengths = graph.strengths()
    members = partition.members()
    active, isolated_nodes = [], []
    for c, nodes in enumerate(members):
        if any(strengths[u] > 0 for u in nodes):
            active.append((c, nodes))
        else:
            isolated_nodes.extend(nodes)
    active.sort(key=lambda item: (-len(item[1]), min(item[1])))
    labels = [0] * len(partition.community)
    names = []
    for rank, (_, nodes) in enumerate(active):
        names.append(f"c{rank}")
        for u in nodes:
            labels[u] = rank
    if isolated_nodes or not active:
        iso = len(names)
        names.append("isolated")
        for u in isolated_nodes:
            labels[u] = iso
        if not active:
            labels = [iso] * len(labels)
    return tuple(labels), tuple(names)


def cletn_labels(network: TemporalNetwork, seed: int,
                 resolution: float = 1.0) -> LabelAssignment:
    """Static labels from one Louvain partition of the full aggregate."""
    graph = aggregate(network)
    part = louvain(graph, child_rng(seed, "louvain", "aggregate"), resolution)
    labels, names = partition_to_labels(part, graph)
    return LabelAssignment.static(labels, names, source="cletn")


def dletn_labels(network: TemporalNetwork, cfg: SplitConfig, seed: int,
                 resolution: float = 1.0) -> LabelAssignment:
    """Per-local-split labels from Louvain on each split's own aggregate.

    Community identities are not aligned across splits; dictionaries are
    split-local so they never need to match.
    """
    cfg.validate_for(network.gap, network.t0 if network.snapshots else None)
    all_labels, all_names = [], []
    for split in range(cfg.splits_per_global):
        graph = aggregate_split(network, cfg, split)
        part = louvain(graph, child_rng(seed, "louvain", "split", split),
                       resolution)
        labels, names = partition_to_labels(part, graph)
        all_labels.append(labels)
        all_names.append(names)
    return LabelAssignment.per_split(all_labels, all_names, source="dletn")
