"""Shared fixtures: toy networks, a synthetic school, dataset discovery."""

from __future__ import annotations

import os
import random
from pathlib import Path

import pytest

from letngen.core import LabelAssignment, SplitConfig, make_network


HOUR = 3600
DAY = 86400


def make_school_events(rng: random.Random, classes: int = 3,
                       per_class: int = 8, days: int = 2, gap: int = 300):
    """Synthetic school: persistent in-class contacts during lessons, mixed
    contacts during a midday break, idle nights.

    Returns (events, metadata, node_count) with raw ids offset by 100 so the
    dense remapping is exercised.
    """
    n = classes * per_class
    class_of = [i // per_class for i in range(n)]
    day_start, day_end = 9 * HOUR, 15 * HOUR
    break_start, break_end = 12 * HOUR, 13 * HOUR
    events = []
    active: set[tuple[int, int]] = set()
    for day in range(days):
        for slot in range(day_start // gap, day_end // gap):
            t = day * DAY + slot * gap
            in_break = break_start <= slot * gap < break_end
            nxt = set()
            for u in range(n):
                for v in range(u + 1, n):
                    same = class_of[u] == class_of[v]
                    if (u, v) in active:
                        stay = 0.65 if same and not in_break else 0.4
                        if rng.random() < stay:
                            nxt.add((u, v))
                    else:
                        if same:
                            born = 0.10 if not in_break else 0.04
                        else:
                            born = 0.03 if in_break else 0.004
                        if rng.random() < born:
                            nxt.add((u, v))
            active = nxt
            for u, v in sorted(active):
                events.append((t, 100 + u, 100 + v))
        active = set()  # nobody carries a contact across the night
    metadata = {100 + i: f"class{class_of[i]}" for i in range(n)}
    return events, metadata, n


def write_school(tmp_path: Path, rng: random.Random, **kwargs):
    """Write the synthetic school as (events file, metadata file)."""
    events, metadata, _ = make_school_events(rng, **kwargs)
    events_path = tmp_path / "school.txt"
    with open(events_path, "w") as fh:
        fh.write("# synthetic school contacts\n")
        for t, i, j in events:
            fh.write(f"{t} {i} {j}\n")
    meta_path = tmp_path / "school_meta.txt"
    with open(meta_path, "w") as fh:
        for raw in sorted(metadata):
            fh.write(f"{raw} {metadata[raw]}\n")
    return events_path, meta_path


@pytest.fixture(scope="session")
def school_files(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("school")
    return write_school(tmp, random.Random(20240901))


@pytest.fixture
def two_cliques_network():
    """Two 4-cliques joined by one edge, constant over 3 snapshots."""
    clique = lambda nodes: [(u, v) for i, u in enumerate(nodes)
                            for v in nodes[i + 1:]]
    edges = clique([0, 1, 2, 3]) + clique([4, 5, 6, 7]) + [(3, 4)]
    return make_network([edges] * 3, 8)


@pytest.fixture
def tiny_cfg():
    return SplitConfig(local_split=300, global_split=600, origin=0)


@pytest.fixture
def uniform_labels():
    return LabelAssignment.uniform


def data_dir() -> Path:
    return Path(os.environ.get("LETNGEN_DATA_DIR",
                               Path(__file__).resolve().parent.parent / "data"))
