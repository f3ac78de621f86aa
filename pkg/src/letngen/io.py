"""Reading contact-event datasets and writing networks, tables and reports.

Input events are whitespace- or tab-delimited lines, either "t i j" or
"t i j Li Lj" (inline labels). Comment lines (#) and blank lines are
skipped; files ending in .gz are transparently decompressed. Raw node
identifiers are remapped to dense indices 0..N-1 in sorted order; the
original ids are retained for output.

Written networks carry a small header so that empty leading or trailing
snapshots, the node set and the time grid survive a round trip exactly.
A file without the header is still a plain triples file.
"""

from __future__ import annotations

import csv
import gzip
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (LabelAssignment, Snapshot, TemporalNetwork,
                   canonical_edge)

NETWORK_HEADER = "# letngen-network v1"
FORMATS = ("triples", "triples_with_labels")


class DataError(Exception):
    """Malformed or inconsistent input data."""


def _open_text(path: Path, mode: str = "rt"):
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def _parse_id(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def _id_sort_key(raw):
    return (0, raw, "") if isinstance(raw, int) else (1, 0, str(raw))


@dataclass
class ParsedEvents:
    """Contact events with dense node ids, sorted by time."""

    events: list[tuple[int, int, int]]
    raw_ids: tuple
    inline_labels: LabelAssignment | None
    path: str
    raw_event_count: int

    @property
    def node_count(self) -> int:
        return len(self.raw_ids)

    @property
    def t_first(self) -> int:
        return self.events[0][0]

    @property
    def t_last(self) -> int:
        return self.events[-1][0]


def parse_events(path: str | Path, fmt: str = "triples") -> ParsedEvents:
    """Parse a contact-event file.

    Malformed lines (wrong arity, non-integer time, self-contacts) are
    rejected together with their line numbers; inline labels must be
    consistent across all occurrences of a node.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(path)
    want_labels = fmt == "triples_with_labels"
    raw_events: list[tuple[int, object, object]] = []
    label_of: dict[object, str] = {}
    bad: list[str] = []
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            if len(tok) < (5 if want_labels else 3):
                bad.append(f"line {lineno}: expected "
                           f"{'t i j Li Lj' if want_labels else 't i j'}")
                continue
            try:
                t = int(tok[0])
            except ValueError:
                bad.append(f"line {lineno}: non-integer time {tok[0]!r}")
                continue
            if t < 0:
                bad.append(f"line {lineno}: negative time {t}")
                continue
            i, j = _parse_id(tok[1]), _parse_id(tok[2])
            if i == j:
                bad.append(f"line {lineno}: self-contact of node {i}")
                continue
            if want_labels:
                for node, lab in ((i, tok[3]), (j, tok[4])):
                    prev = label_of.get(node)
                    if prev is None:
                        label_of[node] = lab
                    elif prev != lab:
                        raise DataError(
                            f"{path}: node {node} has conflicting inline "
                            f"labels {prev!r} and {lab!r} (line {lineno})")
            raw_events.append((t, i, j))
    if bad:
        shown = "; ".join(bad[:10])
        more = f" (+{len(bad) - 10} more)" if len(bad) > 10 else ""
        raise DataError(f"{path}: {shown}{more}")
    if not raw_events:
        raise DataError(f"{path}: no contact events")
    raw_ids = sorted({i for _, i, _ in raw_events} | {j for _, _, j in raw_events},
                     key=_id_sort_key)
    index = {raw: dense for dense, raw in enumerate(raw_ids)}
    events = sorted((t, *sorted((index[i], index[j]))) for t, i, j in raw_events)
    inline = None
    if want_labels:
        names: list[str] = []
        name_index: dict[str, int] = {}
        labels = [0] * len(raw_ids)
        for node, lab in label_of.items():  # insertion = first appearance
            if lab not in name_index:
                name_index[lab] = len(names)
                names.append(lab)
        for raw, dense in index.items():
            labels[dense] = name_index[label_of[raw]]
        inline = LabelAssignment.static(labels, names, source="inline")
    return ParsedEvents(events, tuple(raw_ids), inline, str(path),
                        len(raw_events))


def parse_metadata(path: str | Path) -> dict:
    """Two-column (raw id, label name) file -> ordered id->label map."""
    path = Path(path)
    out: dict = {}
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            if len(tok) < 2:
                raise DataError(f"{path}: line {lineno}: expected 'id label'")
            raw, lab = _parse_id(tok[0]), tok[1]
            if raw in out and out[raw] != lab:
                raise DataError(f"{path}: node {raw} has conflicting labels "
                                f"{out[raw]!r} and {lab!r} (line {lineno})")
            out[raw] = lab
    if not out:
        raise DataError(f"{path}: empty metadata file")
    return out


def metadata_labels(parsed: ParsedEvents, metadata: dict) -> LabelAssignment:
    """Attach metadata labels to the parsed node set.

    Label indices follow first-appearance order in the metadata file,
    restricted to nodes that actually occur in the events. Event nodes
    missing from the metadata are an error.
    """
    missing = [raw for raw in parsed.raw_ids if raw not in metadata]
    if missing:
        shown = ", ".join(map(str, missing[:10]))
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise DataError(f"nodes missing from metadata: {shown}{more}")
    present = set(parsed.raw_ids)
    names: list[str] = []
    name_index: dict[str, int] = {}
    for raw, lab in metadata.items():
        if raw in present and lab not in name_index:
            name_index[lab] = len(names)
            names.append(lab)
    labels = [name_index[metadata[raw]] for raw in parsed.raw_ids]
    return LabelAssignment.static(labels, names, source="metadata")


def snapshotize(parsed: ParsedEvents, gap: int, origin: int = 0,
                ) -> TemporalNetwork:
    """Group events into fixed-width snapshots.

    The first snapshot is the gap cell containing the first event on the
    grid anchored at ``origin``; duplicate contacts within a snapshot
    collapse to one edge and idle cells between the first and last event are
    materialized as empty snapshots.
    """
    if gap <= 0:
        raise DataError("gap must be positive")
    t0 = origin + ((parsed.t_first - origin) // gap) * gap
    length = (parsed.t_last - t0) // gap + 1
    edge_sets: list[set] = [set() for _ in range(length)]
    for t, u, v in parsed.events:
        edge_sets[(t - t0) // gap].add(canonical_edge(u, v))
    snaps = tuple(Snapshot(frozenset(es), i, t0 + i * gap)
                  for i, es in enumerate(edge_sets))
    return TemporalNetwork(snaps, parsed.node_count, gap)


# -- network round trip -------------------------------------------------------

def write_network(network: TemporalNetwork, raw_ids: Sequence, path: str | Path,
                  ) -> None:
    """Write "t i j" triples (original ids) plus a reconstruction header."""
    if len(raw_ids) != network.node_count:
        raise ValueError("raw id map does not cover the node set")
    path = Path(path)
    with _open_text(path, "wt") as fh:
        fh.write(NETWORK_HEADER + "\n")
        fh.write(f"# gap={network.gap}\n")
        t0 = network.snapshots[0].time_start if network.snapshots else 0
        fh.write(f"# t0={t0}\n")
        fh.write(f"# length={network.length}\n")
        fh.write(f"# nodes={network.node_count}\n")
        fh.write("# ids=" + ",".join(map(str, raw_ids)) + "\n")
        for snap in network.snapshots:
            for u, v in sorted(snap.edges):
                fh.write(f"{snap.time_start} {raw_ids[u]} {raw_ids[v]}\n")


def read_network(path: str | Path) -> tuple[TemporalNetwork, tuple]:
    """Read a file written by :func:`write_network`, exactly."""
    path = Path(path)
    header: dict[str, str] = {}
    events: list[tuple[int, object, object]] = []
    with _open_text(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != NETWORK_HEADER:
            raise DataError(f"{path}: missing network header")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                header[key] = value
                continue
            tok = line.split()
            events.append((int(tok[0]), _parse_id(tok[1]), _parse_id(tok[2])))
    try:
        gap = int(header["gap"])
        t0 = int(header["t0"])
        length = int(header["length"])
        node_count = int(header["nodes"])
        raw_ids = tuple(_parse_id(tok) for tok in header["ids"].split(",")
                        ) if header["ids"] else ()
    except KeyError as exc:
        raise DataError(f"{path}: incomplete network header ({exc})") from exc
    index = {raw: dense for dense, raw in enumerate(raw_ids)}
    edge_sets: list[set] = [set() for _ in range(length)]
    for t, i, j in events:
        snap = (t - t0) // gap
        if not 0 <= snap < length:
            raise DataError(f"{path}: event at t={t} outside declared length")
        edge_sets[snap].add(canonical_edge(index[i], index[j]))
    snaps = tuple(Snapshot(frozenset(es), i, t0 + i * gap)
                  for i, es in enumerate(edge_sets))
    return TemporalNetwork(snaps, node_count, gap), raw_ids


def is_network_file(path: str | Path) -> bool:
    try:
        with _open_text(Path(path)) as fh:
            return fh.readline().rstrip("\n") == NETWORK_HEADER
    except (OSError, UnicodeDecodeError):
        return False


# -- reports and CSV ----------------------------------------------------------

def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def write_matrix_csv(matrix: np.ndarray, label_names: Sequence[str],
                     path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["", *label_names])
        for name, row in zip(label_names, np.asarray(matrix)):
            writer.writerow([name, *(repr(float(x)) for x in row)])


def write_series_csv(series: dict[str, np.ndarray], path: str | Path) -> None:
    names = list(series)
    length = len(next(iter(series.values()))) if series else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["snapshot", *names])
        for i in range(length):
            writer.writerow([i, *(repr(float(series[n][i])) for n in names)])


def write_features_csv(matrix: np.ndarray, columns: Sequence[str],
                       raw_ids: Sequence, labels: Sequence[str],
                       path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "label", *columns])
        for dense, (raw, lab) in enumerate(zip(raw_ids, labels)):
            writer.writerow([raw, lab, *map(int, matrix[dense])])


def write_coords_csv(coords: np.ndarray, raw_ids: Sequence,
                     labels: Sequence[str], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "label", "pc1", "pc2"])
        for dense, (raw, lab) in enumerate(zip(raw_ids, labels)):
            writer.writerow([raw, lab, repr(float(coords[dense, 0])),
                             repr(float(coords[dense, 1]))])


def write_partition(labels: LabelAssignment, raw_ids: Sequence,
                    path: str | Path) -> None:
    """Two-column (original id, label name) dump of a static assignment."""
    node_labels, names = labels.for_split(0)
    with open(path, "w", encoding="utf-8") as fh:
        for raw, lab in zip(raw_ids, node_labels):
            fh.write(f"{raw} {names[lab]}\n")
