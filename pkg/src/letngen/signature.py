"""Labeled egocentric temporal neighborhood signatures and their masked forms.

A signature describes what one ego node sees over a window of k consecutive
snapshots: every neighbor active in the window contributes one string of k
slots, where slot i holds the neighbor's label code if the ego-neighbor link
is present in snapshot i and the all-zero code otherwise. Neighbor strings
are sorted lexicographically so the signature is independent of node
identities, and the ego's own label code is prepended.

Masking removes each neighbor's final slot (the layer a generator is asked
to predict) and replaces it with a single wildcard. Neighbors that appear
only in the final layer carry no identity in the masked key; they are
recorded in the extension as per-label counts of brand-new ties.

The unlabeled variant is the degenerate single-label case: width 1, code "1",
which reproduces plain presence-bit signatures.

Canonical text renderings (ego and neighbor strings joined by "|", wildcard
"x") are stable across runs and are used as dictionary keys, in debug dumps
and in the feature-matrix export.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .core import LabelAssignment, SplitConfig, TemporalNetwork, local_split_of

WILDCARD = "x"
SEPARATOR = "|"


@dataclass(frozen=True)
class NodeEncoding:
    """Injective map from label indices to fixed-width binary strings.

    The all-zero string is reserved for "link absent" and is never a label
    code, so width = ceil(log2(L + 1)) and label i is encoded as the binary
    representation of i + 1, zero-padded.
    """

    width: int
    codes: tuple[str, ...]

    @property
    def zero(self) -> str:
        return "0" * self.width

    def label_of_code(self, code: str) -> int:
        return int(code, 2) - 1


def build_encoding(label_count: int) -> NodeEncoding:
    if label_count < 1:
        raise ValueError("no labels")
    width = max(1, (label_count).bit_length())
    # bit_length(L) == ceil(log2(L+1)) for L >= 1
    codes = tuple(format(i + 1, f"0{width}b") for i in range(label_count))
    return NodeEncoding(width, codes)


@dataclass(frozen=True)
class Signature:
    """Full k-slot signature of one ego over one window."""

    ego_code: str
    neighbor_sigs: tuple[str, ...]

    def render(self) -> str:
        return SEPARATOR.join((self.ego_code, *self.neighbor_sigs))


@dataclass(frozen=True)
class MaskedKey:
    """Signature with each neighbor's final slot replaced by a wildcard.

    Neighbors whose first k-1 slots are all zero are dropped: they have no
    identity before the predicted layer and live in the Extension instead.
    """

    ego_code: str
    masked_neighbor_sigs: tuple[str, ...]

    def render(self) -> str:
        return SEPARATOR.join((self.ego_code, *self.masked_neighbor_sigs))


@dataclass(frozen=True)
class Extension:
    """The removed final slots plus counts of brand-new neighbors by label.

    ``slots`` aligns with the masked key's sorted neighbor list; groups of
    identical masked strings have their slot values sorted so that equal
    neighborhoods always produce one canonical (key, extension) pair.
    ``new_neighbor_counts`` maps label codes to how many neighbors appeared
    in the predicted layer only.
    """

    slots: tuple[str, ...]
    new_neighbor_counts: tuple[tuple[str, int], ...]

    def render(self) -> str:
        new_part = ",".join(f"{code}:{n}" for code, n in self.new_neighbor_counts)
        return SEPARATOR.join(self.slots) + ";" + new_part

    @classmethod
    def parse(cls, text: str) -> "Extension":
        slot_part, _, new_part = text.partition(";")
        slots = tuple(slot_part.split(SEPARATOR)) if slot_part else ()
        new = []
        if new_part:
            for item in new_part.split(","):
                code, _, n = item.partition(":")
                new.append((code, int(n)))
        return cls(slots, tuple(new))

    @property
    def is_empty(self) -> bool:
        return not self.new_neighbor_counts and all(set(s) == {"0"} for s in self.slots)


def empty_extension(key: MaskedKey, width: int) -> Extension:
    """Fallback for unseen keys: keep nothing, request nothing."""
    return Extension(("0" * width,) * len(key.masked_neighbor_sigs), ())


def extract_signature(network: TemporalNetwork, labels: LabelAssignment,
                      ego: int, t: int, k: int, enc: NodeEncoding,
                      split: int | None = None) -> Signature:
    """Signature of ``ego`` over snapshots t..t+k-1.

    ``split`` selects the label table for per-split assignments; it defaults
    to the local split of the window's last snapshot when a SplitConfig was
    used to build the assignment (callers pass it explicitly; static
    assignments ignore it).
    """
    if k < 2:
        raise ValueError("window size k must be at least 2")
    if t < 0 or t + k > network.length:
        raise ValueError(f"window [{t},{t + k}) outside 0..{network.length}")
    if split is None:
        if labels.mode == "per_split":
            raise ValueError("per-split labels require an explicit split")
        split = 0
    node_labels, _ = labels.for_split(split)
    adjs = [network.snapshots[t + i].adjacency() for i in range(k)]
    return _signature_from_adjacency(adjs, node_labels, ego, enc)


def _signature_from_adjacency(adjs: Sequence[Mapping[int, set[int]]],
                              node_labels: Sequence[int], ego: int,
                              enc: NodeEncoding) -> Signature:
    neighbors: set[int] = set()
    ego_rows = [adj.get(ego) for adj in adjs]
    for row in ego_rows:
        if row:
            neighbors.update(row)
    sigs = []
    zero = enc.zero
    for nbr in neighbors:
        code = enc.codes[node_labels[nbr]]
        sigs.append("".join(code if row and nbr in row else zero for row in ego_rows))
    sigs.sort()
    return Signature(enc.codes[node_labels[ego]], tuple(sigs))


def mask_signature(sig: Signature) -> tuple[MaskedKey, Extension]:
    """Split a k-slot signature into its masked key and its extension.

    Together the two reconstruct the multiset of neighbor strings exactly:
    each masked entry's prefix concatenated with its slot value, plus one
    single-active-slot string per new-neighbor count.
    """
    width = len(sig.ego_code)
    zero = "0" * width
    prefixed: list[tuple[str, str]] = []  # (prefix, last slot)
    new_counts: dict[str, int] = {}
    for ns in sig.neighbor_sigs:
        prefix, last = ns[:-width], ns[-width:]
        if set(prefix) == {"0"}:
            # Present only in the predicted layer: no identity in the key.
            new_counts[last] = new_counts.get(last, 0) + 1
        else:
            prefixed.append((prefix, last))
    # Sort by (prefix, slot): equal prefixes stay contiguous with their slot
    # values in canonical ascending order.
    prefixed.sort()
    key = MaskedKey(sig.ego_code, tuple(p + WILDCARD for p, _ in prefixed))
    ext = Extension(tuple(last for _, last in prefixed),
                    tuple(sorted(new_counts.items())))
    return key, ext


def unmask(key: MaskedKey, ext: Extension, k: int) -> Signature:
    """Reconstruct the full signature encoded by (key, extension)."""
    width = len(key.ego_code)
    if len(ext.slots) != len(key.masked_neighbor_sigs):
        raise ValueError("extension does not match key arity")
    sigs = [masked[:-1] + slot
            for masked, slot in zip(key.masked_neighbor_sigs, ext.slots)]
    zero_prefix = "0" * ((k - 1) * width)
    for code, n in ext.new_neighbor_counts:
        sigs.extend([zero_prefix + code] * n)
    sigs.sort()
    return Signature(key.ego_code, tuple(sigs))


@dataclass(frozen=True)
class CensusRecord:
    split: int
    key: str
    extension: str


def per_split_encodings(labels: LabelAssignment,
                        splits_per_global: int) -> list[NodeEncoding]:
    """One encoding per local split (all identical for static assignments)."""
    if labels.mode == "static":
        enc = build_encoding(labels.label_count())
        return [enc] * splits_per_global
    return [build_encoding(labels.label_count(s)) for s in range(splits_per_global)]


def signature_census(network: TemporalNetwork, labels: LabelAssignment,
                     k: int, cfg: SplitConfig,
                     enc: NodeEncoding | None = None) -> Iterator[CensusRecord]:
    """Stream one (split, masked key, extension) record per (ego, window).

    Windows cover snapshots t..t+k-1 for every t in 0..T-k and every ego,
    including isolated ones. A record's local split is that of the window's
    last snapshot, the one its extension predicts; the same split selects
    the label table for per-split assignments.
    """
    if network.length < k:
        raise ValueError("network shorter than window")
    cfg.validate_for(network.gap, network.t0)
    encodings = ([enc] * cfg.splits_per_global if enc is not None
                 else per_split_encodings(labels, cfg.splits_per_global))
    adjs = network.adjacency_sequence()
    n = network.node_count
    for t in range(network.length - k + 1):
        last = t + k - 1
        split = local_split_of(network.snapshots[last].time_start, cfg)
        node_labels, _ = labels.for_split(split)
        e = encodings[split]
        window = adjs[t:t + k]
        for ego in range(n):
            sig = _signature_from_adjacency(window, node_labels, ego, e)
            key, ext = mask_signature(sig)
            yield CensusRecord(split, key.render(), ext.render())
