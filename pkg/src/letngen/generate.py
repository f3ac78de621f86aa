"""Layer-by-layer surrogate network generation.

Each step builds every node's masked neighborhood key from the last k-1
snapshots, samples a desired extension from the probability table of the
target snapshot's local split, and reconciles the resulting per-ego requests
into one simple undirected layer with three validation rules:

1. reciprocal requests (i wants j and j wants i) always become edges;
2. exactly floor(m/2) of the m unidirectional requests, drawn uniformly
   without replacement, become edges;
3. new-tie stubs are matched within exact label-pair buckets (a stub of u
   for label b matches a stub of some b-labeled v for u's label), greedily
   over shuffled buckets; leftovers are discarded.

A trajectory is strictly sequential; different surrogates of a batch are
independent and may run in parallel, each with a child rng derived from the
master seed and its surrogate index.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import (LabelAssignment, Snapshot, SplitConfig, TemporalNetwork,
                   canonical_edge, local_split_of)
from .dictionary import ExtensionTable
from .rng import child_seed
from .signature import WILDCARD, MaskedKey, build_encoding

MODES = ("letn", "etn", "cletn", "dletn")


@dataclass(frozen=True)
class GenConfig:
    """Resolved generation parameters for one surrogate batch."""

    target_length: int
    node_count: int
    seed_layers: tuple[Snapshot, ...]
    split_config: SplitConfig
    k: int = 2
    gap: int = 300
    mode: str = "letn"
    surrogate_count: int = 10

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.seed_layers) != self.k - 1:
            raise ValueError(f"need {self.k - 1} seed layers, got {len(self.seed_layers)}")
        if self.target_length < self.k - 1:
            raise ValueError("target_length shorter than the seed prefix")
        for snap in self.seed_layers:
            for u, v in snap.edges:
                if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                    raise ValueError(f"seed edge ({u},{v}) outside node set")

    @property
    def time_origin(self) -> int:
        return self.seed_layers[0].time_start


def seeds_from_network(network: TemporalNetwork, k: int) -> tuple[Snapshot, ...]:
    """Default seeds: the first k-1 snapshots of the original network."""
    if network.length < k - 1:
        raise ValueError("network shorter than k-1 snapshots")
    return network.snapshots[:k - 1]


@dataclass
class RequestSet:
    """Per-ego desired connections for one provisional layer."""

    kept: dict[int, set[int]] = field(default_factory=dict)
    stubs: dict[int, dict[int, int]] = field(default_factory=dict)

    def add_kept(self, ego: int, neighbor: int) -> None:
        if ego == neighbor:
            raise ValueError("ego cannot request itself")
        self.kept.setdefault(ego, set()).add(neighbor)

    def add_stubs(self, ego: int, label: int, count: int) -> None:
        if count <= 0:
            return
        per = self.stubs.setdefault(ego, {})
        per[label] = per.get(label, 0) + count


def propose_layer(history: Sequence[Snapshot], target_time: int,
                  table: ExtensionTable, labels: LabelAssignment,
                  rng: random.Random, node_count: int) -> RequestSet:
    """Sample every node's desired neighborhood for the next layer.

    The masked key is the ego's signature over the k-1 history snapshots
    with a wildcard final slot. Sampled slot values are translated back to
    concrete nodes by grouping current neighbors with identical masked
    strings and assigning the group's slots to members uniformly at random;
    new-neighbor counts become labeled stubs. Unseen keys fall back to the
    empty extension.
    """
    split = local_split_of(target_time, table.split_config)
    meta = table.split_meta[split]
    node_labels, _ = labels.for_split(split)
    enc = build_encoding(meta.label_count)
    zero = enc.zero
    adjs = [snap.adjacency() for snap in history]
    requests = RequestSet()
    for ego in range(node_count):
        rows = [adj.get(ego) for adj in adjs]
        neighbors: set[int] = set()
        for row in rows:
            if row:
                neighbors.update(row)
        groups: dict[str, list[int]] = {}
        for nbr in neighbors:
            code = enc.codes[node_labels[nbr]]
            prefix = "".join(code if row and nbr in row else zero for row in rows)
            groups.setdefault(prefix, []).append(nbr)
        prefixes = sorted(groups)
        masked: list[str] = []
        for p in prefixes:  # one masked entry per neighbor, not per pattern
            masked.extend([p + WILDCARD] * len(groups[p]))
        key = MaskedKey(enc.codes[node_labels[ego]], tuple(masked))
        ext = table.sample_extension(split, key, rng)
        if len(ext.slots) != len(key.masked_neighbor_sigs):
            raise RuntimeError("sampled extension arity does not match key")
        pos = 0
        for prefix in prefixes:
            members = groups[prefix]
            slots = list(ext.slots[pos:pos + len(members)])
            pos += len(members)
            rng.shuffle(members)
            for nbr, slot in zip(members, slots):
                if slot != zero:
                    requests.add_kept(ego, nbr)
        for code, count in ext.new_neighbor_counts:
            requests.add_stubs(ego, enc.label_of_code(code), count)
    return requests


def validate_layer(requests: RequestSet, node_labels: Sequence[int],
                   rng: random.Random,
                   diagnostics: dict[str, int] | None = None) -> frozenset:
    """Reconcile a provisional layer into a simple undirected snapshot."""
    edges: set[tuple[int, int]] = set()
    directed = {(ego, nbr) for ego, nbrs in requests.kept.items() for nbr in nbrs}
    unidirectional = []
    for u, v in sorted(directed):
        if (v, u) in directed:
            edges.add(canonical_edge(u, v))
        else:
            unidirectional.append((u, v))
    # rule 2: exactly floor(m/2), uniform without replacement
    accepted = rng.sample(unidirectional, len(unidirectional) // 2)
    for u, v in accepted:
        edges.add(canonical_edge(u, v))
    # rule 3: match stubs within exact label-pair buckets
    buckets: dict[tuple[int, int], list[list[int]]] = {}
    for ego in sorted(requests.stubs):
        ego_label = node_labels[ego]
        for want, count in sorted(requests.stubs[ego].items()):
            a, b = min(ego_label, want), max(ego_label, want)
            bucket = buckets.setdefault((a, b), [[], []])
            side = 0 if ego_label == a else 1
            bucket[side].extend([ego] * count)
    discarded = 0
    for (a, b) in sorted(buckets):
        side_a, side_b = buckets[(a, b)]
        if a == b:
            pool = side_a + side_b
            rng.shuffle(pool)
            taken = [False] * len(pool)
            for i, u in enumerate(pool):
                if taken[i]:
                    continue
                for j in range(i + 1, len(pool)):
                    if taken[j] or pool[j] == u:
                        continue
                    e = canonical_edge(u, pool[j])
                    if e in edges:
                        continue
                    edges.add(e)
                    taken[i] = taken[j] = True
                    break
            discarded += taken.count(False)
        else:
            rng.shuffle(side_a)
            rng.shuffle(side_b)
            used = [False] * len(side_b)
            for u in side_a:
                matched = False
                for j, v in enumerate(side_b):
                    if used[j]:
                        continue
                    e = canonical_edge(u, v)
                    if e in edges:
                        continue
                    edges.add(e)
                    used[j] = True
                    matched = True
                    break
                if not matched:
                    discarded += 1
            discarded += used.count(False)
    if diagnostics is not None:
        diagnostics["unidirectional_rejected"] = (
            diagnostics.get("unidirectional_rejected", 0)
            + len(unidirectional) - len(accepted))
        diagnostics["stubs_discarded"] = (
            diagnostics.get("stubs_discarded", 0) + discarded)
    return frozenset(edges)


def generate_surrogate(table: ExtensionTable, labels: LabelAssignment,
                       cfg: GenConfig, rng: random.Random,
                       diagnostics: dict[str, int] | None = None,
                       ) -> TemporalNetwork:
    """Generate one surrogate of cfg.target_length snapshots.

    The first k-1 snapshots are the seeds; every following snapshot is the
    validated provisional layer proposed from the previous k-1. Timestamps
    advance by gap from the first seed's time, so local splits line up with
    the training network's daily phase.
    """
    _check_dimensions(table, labels, cfg)
    t0 = cfg.time_origin
    snaps: list[Snapshot] = [
        Snapshot(seed.edges, i, t0 + i * cfg.gap)
        for i, seed in enumerate(cfg.seed_layers)
    ]
    history = list(cfg.seed_layers)
    for t in range(cfg.k - 1, cfg.target_length):
        time_t = t0 + t * cfg.gap
        split = local_split_of(time_t, table.split_config)
        node_labels, _ = labels.for_split(split)
        requests = propose_layer(history, time_t, table, labels, rng,
                                 cfg.node_count)
        edges = validate_layer(requests, node_labels, rng, diagnostics)
        snap = Snapshot(edges, t, time_t)
        snaps.append(snap)
        history.append(snap)
        if len(history) > cfg.k - 1:
            history.pop(0)
    return TemporalNetwork(tuple(snaps), cfg.node_count, cfg.gap)


def _check_dimensions(table: ExtensionTable, labels: LabelAssignment,
                      cfg: GenConfig) -> None:
    if table.k != cfg.k:
        raise ValueError(f"table built for k={table.k}, config wants k={cfg.k}")
    if table.gap != cfg.gap:
        raise ValueError(f"table gap {table.gap} != config gap {cfg.gap}")
    if labels.node_count != cfg.node_count:
        raise ValueError("label assignment does not cover node_count")
    splits = table.split_config.splits_per_global
    if labels.mode == "per_split" and len(labels.split_labels) != splits:
        raise ValueError("per-split labels do not match table splits")
    for split in range(splits):
        want = table.split_meta[split].label_count
        have = labels.label_count(split)
        if want != have:
            raise ValueError(f"split {split}: table has {want} labels, "
                             f"assignment has {have}")
    table.split_config.validate_for(cfg.gap, cfg.time_origin)


def generate_batch(table: ExtensionTable, labels: LabelAssignment,
                   cfg: GenConfig, master_seed: int,
                   workers: int = 1) -> list[TemporalNetwork]:
    """Generate cfg.surrogate_count surrogates, reproducibly.

    Surrogate i always uses the child seed derived from (master_seed, i),
    so batches are bit-identical for a given master seed regardless of
    worker count, and seeds stay paired across modes for comparisons.
    """
    seeds = [child_seed(master_seed, "surrogate", i)
             for i in range(cfg.surrogate_count)]
    if workers <= 1 or cfg.surrogate_count == 1:
        return [generate_surrogate(table, labels, cfg, random.Random(s))
                for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_worker, table, labels, cfg, s) for s in seeds]
        return [f.result() for f in futures]


def _worker(table: ExtensionTable, labels: LabelAssignment, cfg: GenConfig,
            seed: int) -> TemporalNetwork:
    return generate_surrogate(table, labels, cfg, random.Random(seed))


def rescale_population(labels: LabelAssignment, seed_layers: Sequence[Snapshot],
                       new_count: int, rng: random.Random,
                       ) -> tuple[LabelAssignment, tuple[Snapshot, ...]]:
    """Resize the node set while preserving label proportions.

    New nodes receive labels by largest-remainder apportionment of the
    original proportions; seed layers are rewritten through a random
    label-preserving node map (cycled when the new label class is smaller,
    with collision edges dropped). Only static assignments can be rescaled.
    """
    if labels.mode != "static":
        raise ValueError("population rescaling needs a static label assignment")
    if new_count < 1:
        raise ValueError("new node count must be positive")
    old_labels, names = labels.for_split(0)
    counts = [0] * len(names)
    for lab in old_labels:
        counts[lab] += 1
    total = len(old_labels)
    quotas = [new_count * c / total for c in counts]
    seats = [int(q) for q in quotas]
    remainder = new_count - sum(seats)
    order = sorted(range(len(names)), key=lambda i: (-(quotas[i] - seats[i]), i))
    for i in order[:remainder]:
        seats[i] += 1
    new_labels: list[int] = []
    for lab, n in enumerate(seats):
        new_labels.extend([lab] * n)
    new_assignment = LabelAssignment.static(new_labels, names,
                                            source=labels.source + "+rescaled")
    # label-preserving node map, cycling when the new class is smaller
    node_map: dict[int, int] = {}
    for lab in range(len(names)):
        old_members = [u for u, l in enumerate(old_labels) if l == lab]
        new_members = [u for u, l in enumerate(new_labels) if l == lab]
        rng.shuffle(old_members)
        rng.shuffle(new_members)
        if not new_members:
            continue
        for i, u in enumerate(old_members):
            node_map[u] = new_members[i % len(new_members)]
    new_seeds = []
    for snap in seed_layers:
        edges = set()
        for u, v in snap.edges:
            if u not in node_map or v not in node_map:
                continue
            nu, nv = node_map[u], node_map[v]
            if nu != nv:
                edges.add(canonical_edge(nu, nv))
        new_seeds.append(Snapshot(frozenset(edges), snap.index, snap.time_start))
    return new_assignment, tuple(new_seeds)
