"""Shared domain types for temporal contact networks.

A temporal network is an ordered sequence of undirected edge-set snapshots
over a fixed node set. Nodes are dense integer indices 0..N-1 (raw dataset
identifiers are remapped at ingestion, see :mod:`letngen.io`). All types here
are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Store undirected pairs with the smaller id first."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Snapshot:
    """One layer of a temporal network: all interactions within one gap."""

    edges: frozenset[Edge]
    index: int
    time_start: int

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) in snapshot {self.index}")
            if u > v:
                raise ValueError(f"non-canonical edge ({u},{v}) in snapshot {self.index}")

    def adjacency(self) -> dict[int, set[int]]:
        """Adjacency map restricted to active nodes."""
        adj: dict[int, set[int]] = {}
        for u, v in self.edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return adj

    def degree_sequence(self, node_count: int) -> list[int]:
        deg = [0] * node_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class TemporalNetwork:
    """Ordered snapshots over a fixed node set, with a fixed snapshot width.

    Idle periods are preserved as empty snapshots, never compressed away,
    so that split bookkeeping and per-snapshot metric series stay aligned
    with wall-clock time.
    """

    snapshots: tuple[Snapshot, ...]
    node_count: int
    gap: int

    def __post_init__(self) -> None:
        if self.gap <= 0:
            raise ValueError("gap must be positive")
        for i, snap in enumerate(self.snapshots):
            if snap.index != i:
                raise ValueError(f"snapshot index {snap.index} at position {i}")
            for u, v in snap.edges:
                if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                    raise ValueError(f"edge ({u},{v}) outside 0..{self.node_count - 1}")
        if len(self.snapshots) >= 2:
            t0 = self.snapshots[0].time_start
            for snap in self.snapshots:
                if snap.time_start != t0 + snap.index * self.gap:
                    raise ValueError("snapshot times must advance by gap")

    @property
    def length(self) -> int:
        return len(self.snapshots)

    @property
    def t0(self) -> int:
        if not self.snapshots:
            raise ValueError("empty network has no origin time")
        return self.snapshots[0].time_start

    def adjacency_sequence(self) -> list[dict[int, set[int]]]:
        return [snap.adjacency() for snap in self.snapshots]

    def interaction_count(self) -> int:
        """Total number of (edge, snapshot) occurrences."""
        return sum(len(s.edges) for s in self.snapshots)


def make_network(edge_lists: Sequence[Iterable[Edge]], node_count: int,
                 gap: int = 300, t0: int = 0) -> TemporalNetwork:
    """Build a TemporalNetwork from per-snapshot edge iterables."""
    snaps = tuple(
        Snapshot(frozenset(canonical_edge(u, v) for u, v in edges), i, t0 + i * gap)
        for i, edges in enumerate(edge_lists)
    )
    return TemporalNetwork(snaps, node_count, gap)


@dataclass(frozen=True)
class SplitConfig:
    """Periodic time partitioning: local splits repeating across global splits.

    The default (3600 s local, 86400 s global) pools each hour of the day
    across days, which captures daily rhythm in multi-day recordings.
    ``origin`` is the timestamp of split phase zero.
    """

    local_split: int = 3600
    global_split: int = 86400
    origin: int = 0

    def __post_init__(self) -> None:
        if self.local_split <= 0 or self.global_split <= 0:
            raise ValueError("splits must be positive")
        if self.global_split % self.local_split != 0:
            raise ValueError("global_split must be a multiple of local_split")

    @property
    def splits_per_global(self) -> int:
        return self.global_split // self.local_split

    def validate_for(self, gap: int, t0: int | None = None) -> None:
        """Check gap/origin alignment against a network's time grid."""
        if self.local_split % gap != 0:
            raise ValueError("local_split must be a multiple of gap")
        if self.origin % gap != 0:
            raise ValueError("origin must lie on the gap grid")
        if t0 is not None and (t0 - self.origin) % gap != 0:
            raise ValueError("network origin not aligned with split origin")

    @classmethod
    def aligned(cls, first_time: int, local_split: int = 3600,
                global_split: int = 86400) -> "SplitConfig":
        """Default origin: first event time floored to a global boundary."""
        origin = (first_time // global_split) * global_split
        return cls(local_split, global_split, origin)


def local_split_of(time: int, cfg: SplitConfig) -> int:
    """Index of the local split containing ``time``, periodic in global_split."""
    return ((time - cfg.origin) % cfg.global_split) // cfg.local_split


def snapshot_split(network: TemporalNetwork, index: int, cfg: SplitConfig) -> int:
    return local_split_of(network.snapshots[index].time_start, cfg)


@dataclass(frozen=True)
class WeightedStaticGraph:
    """Simple undirected graph with positive edge weights (occurrence counts)."""

    node_count: int
    weights: Mapping[Edge, float]

    def __post_init__(self) -> None:
        for (u, v), w in self.weights.items():
            if u >= v:
                raise ValueError(f"non-canonical weighted edge ({u},{v})")
            if w <= 0:
                raise ValueError(f"non-positive weight on ({u},{v})")

    @property
    def total_weight(self) -> float:
        return sum(self.weights.values())

    def adjacency(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [dict() for _ in range(self.node_count)]
        for (u, v), w in self.weights.items():
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def strengths(self) -> list[float]:
        s = [0.0] * self.node_count
        for (u, v), w in self.weights.items():
            s[u] += w
            s[v] += w
        return s


def aggregate(network: TemporalNetwork, start: int | None = None,
              stop: int | None = None) -> WeightedStaticGraph:
    """Collapse a snapshot range [start, stop) into one weighted static graph.

    Edge weight = number of snapshots in the range containing the edge.
    An empty range yields an empty graph.
    """
    lo = 0 if start is None else start
    hi = network.length if stop is None else stop
    if lo < 0 or hi > network.length:
        raise ValueError(f"range [{lo},{hi}) outside 0..{network.length}")
    weights: dict[Edge, int] = {}
    for snap in network.snapshots[lo:hi]:
        for e in snap.edges:
            weights[e] = weights.get(e, 0) + 1
    return WeightedStaticGraph(network.node_count, weights)


def aggregate_split(network: TemporalNetwork, cfg: SplitConfig,
                    split: int) -> WeightedStaticGraph:
    """Aggregate only the snapshots that fall in one local split (pooled
    across global splits)."""
    weights: dict[Edge, int] = {}
    for snap in network.snapshots:
        if local_split_of(snap.time_start, cfg) != split:
            continue
        for e in snap.edges:
            weights[e] = weights.get(e, 0) + 1
    return WeightedStaticGraph(network.node_count, weights)


@dataclass(frozen=True)
class LabelAssignment:
    """Node labels, either one static map or one map per local split.

    Label indices are contiguous 0..L-1 within each context. In per-split
    mode the label count (and therefore the encoding width) may differ
    between splits; signatures from different splits never mix.
    """

    mode: str  # "static" | "per_split"
    static_labels: tuple[int, ...] | None = None
    static_names: tuple[str, ...] | None = None
    split_labels: tuple[tuple[int, ...], ...] | None = None
    split_names: tuple[tuple[str, ...], ...] | None = None
    source: str = "unspecified"

    def __post_init__(self) -> None:
        if self.mode == "static":
            if self.static_labels is None or self.static_names is None:
                raise ValueError("static mode requires static_labels and static_names")
            _check_contiguous(self.static_labels, len(self.static_names))
        elif self.mode == "per_split":
            if self.split_labels is None or self.split_names is None:
                raise ValueError("per_split mode requires split tables")
            if len(self.split_labels) != len(self.split_names):
                raise ValueError("per-split labels and names differ in length")
            for labels, names in zip(self.split_labels, self.split_names):
                _check_contiguous(labels, len(names))
        else:
            raise ValueError(f"unknown label mode {self.mode!r}")

    @classmethod
    def static(cls, labels: Sequence[int], names: Sequence[str],
               source: str = "unspecified") -> "LabelAssignment":
        return cls("static", static_labels=tuple(labels),
                   static_names=tuple(names), source=source)

    @classmethod
    def per_split(cls, labels: Sequence[Sequence[int]],
                  names: Sequence[Sequence[str]],
                  source: str = "unspecified") -> "LabelAssignment":
        return cls("per_split",
                   split_labels=tuple(tuple(t) for t in labels),
                   split_names=tuple(tuple(n) for n in names),
                   source=source)

    @classmethod
    def uniform(cls, node_count: int) -> "LabelAssignment":
        """Single shared label; reduces the pipeline to the unlabeled method."""
        return cls.static([0] * node_count, ["all"], source="uniform")

    @property
    def node_count(self) -> int:
        if self.mode == "static":
            return len(self.static_labels)  # type: ignore[arg-type]
        return len(self.split_labels[0])  # type: ignore[index]

    def for_split(self, split: int) -> tuple[tuple[int, ...], tuple[str, ...]]:
        """(node->label, label names) in effect for one local split."""
        if self.mode == "static":
            return self.static_labels, self.static_names  # type: ignore[return-value]
        if not 0 <= split < len(self.split_labels):  # type: ignore[arg-type]
            raise ValueError(f"no labels for split {split}")
        return self.split_labels[split], self.split_names[split]  # type: ignore[index]

    def label_count(self, split: int = 0) -> int:
        return len(self.for_split(split)[1])


def _check_contiguous(labels: Sequence[int], label_count: int) -> None:
    # Index space is 0..L-1; a label may be uninhabited (e.g. after
    # population rescaling) but never out of range.
    if label_count < 1:
        raise ValueError("at least one label required")
    for lab in labels:
        if not 0 <= lab < label_count:
            raise ValueError(f"label index {lab} outside 0..{label_count - 1}")
