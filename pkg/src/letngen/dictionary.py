"""Per-local-split empirical distributions over neighborhood extensions.

Counts are stored exactly as integers, never pre-normalized, so tables built
from permuted or sharded census streams merge associatively and sampling is
reproducible. Keys and extensions are held in their canonical text
renderings (see :mod:`letngen.signature`).
"""

from __future__ import annotations

import gzip
import json
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from pathlib import Path
from typing import Iterable

from .core import LabelAssignment, SplitConfig, TemporalNetwork
from .signature import (CensusRecord, Extension, MaskedKey, empty_extension,
                        per_split_encodings, signature_census)

FORMAT_NAME = "letngen-table"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class SplitMeta:
    """Encoding dimensions in effect for one local split."""

    label_count: int
    width: int
    label_names: tuple[str, ...]


@dataclass
class ExtensionTable:
    """Masked key -> extension count map, one per local split."""

    k: int
    gap: int
    split_config: SplitConfig
    split_meta: tuple[SplitMeta, ...]
    counts: list[dict[str, dict[str, int]]]
    fallbacks: int = 0
    _samplers: list[dict[str, tuple[list[str], list[int]]]] = field(
        default_factory=list, repr=False)

    def __post_init__(self) -> None:
        s = self.split_config.splits_per_global
        if len(self.split_meta) != s or len(self.counts) != s:
            raise ValueError("one meta entry and one count map required per split")

    @classmethod
    def empty(cls, k: int, gap: int, cfg: SplitConfig,
              split_meta: Iterable[SplitMeta]) -> "ExtensionTable":
        meta = tuple(split_meta)
        return cls(k, gap, cfg, meta,
                   [dict() for _ in range(cfg.splits_per_global)])

    def key_total(self, split: int, key: str) -> int:
        exts = self.counts[split].get(key)
        return sum(exts.values()) if exts else 0

    def add(self, record: CensusRecord) -> None:
        exts = self.counts[record.split].setdefault(record.key, {})
        exts[record.extension] = exts.get(record.extension, 0) + 1

    # -- sampling ----------------------------------------------------------

    def _sampler(self, split: int, key: str):
        if not self._samplers:
            self._samplers = [dict() for _ in range(len(self.counts))]
        cache = self._samplers[split]
        entry = cache.get(key)
        if entry is None:
            exts = self.counts[split].get(key)
            if exts is None:
                return None
            items = sorted(exts.items())  # deterministic draw order
            cum = list(accumulate(n for _, n in items))
            entry = ([e for e, _ in items], cum)
            cache[key] = entry
        return entry

    def sample_extension(self, split: int, key: MaskedKey,
                         rng: random.Random) -> Extension:
        """Draw an extension proportionally to counts.

        Unseen keys fall back to the empty extension (keep nothing, request
        nothing); the miss is tallied in ``fallbacks`` so experiments can
        report fallback rates.
        """
        sampler = self._sampler(split, key.render())
        if sampler is None:
            self.fallbacks += 1
            return empty_extension(key, self.split_meta[split].width)
        exts, cum = sampler
        if len(exts) == 1:
            return Extension.parse(exts[0])
        pick = bisect_right(cum, rng.randrange(cum[-1]))
        return Extension.parse(exts[pick])

    # -- diagnostics -------------------------------------------------------

    def stats(self) -> dict:
        """Deterministic summary: keys per split, extension spread, coverage."""
        per_split = []
        for split, keymap in enumerate(self.counts):
            n_keys = len(keymap)
            n_exts = sum(len(v) for v in keymap.values())
            n_obs = sum(sum(v.values()) for v in keymap.values())
            per_split.append({
                "split": split,
                "keys": n_keys,
                "extensions": n_exts,
                "observations": n_obs,
                "max_extensions_per_key": max((len(v) for v in keymap.values()),
                                              default=0),
            })
        return {
            "k": self.k,
            "gap": self.gap,
            "splits": len(self.counts),
            "nonempty_splits": sum(1 for s in per_split if s["keys"] > 0),
            "total_keys": sum(s["keys"] for s in per_split),
            "total_extensions": sum(s["extensions"] for s in per_split),
            "total_observations": sum(s["observations"] for s in per_split),
            "per_split": per_split,
        }


def build_table(records: Iterable[CensusRecord], k: int, gap: int,
                cfg: SplitConfig,
                split_meta: Iterable[SplitMeta]) -> ExtensionTable:
    """Accumulate census records into counts; order of the stream is
    irrelevant to the result."""
    table = ExtensionTable.empty(k, gap, cfg, split_meta)
    widths = [m.width for m in table.split_meta]
    for rec in records:
        ego_code = rec.key.split("|", 1)[0]
        if len(ego_code) != widths[rec.split]:
            raise ValueError(
                f"record width {len(ego_code)} does not match split "
                f"{rec.split} width {widths[rec.split]}")
        table.add(rec)
    return table


def split_meta_for(labels: LabelAssignment, cfg: SplitConfig) -> tuple[SplitMeta, ...]:
    encodings = per_split_encodings(labels, cfg.splits_per_global)
    return tuple(
        SplitMeta(labels.label_count(s), encodings[s].width,
                  labels.for_split(s)[1])
        for s in range(cfg.splits_per_global))


def train_table(network: TemporalNetwork, labels: LabelAssignment, k: int,
                cfg: SplitConfig) -> ExtensionTable:
    """Census a network and accumulate the full extension table."""
    meta = split_meta_for(labels, cfg)
    return build_table(signature_census(network, labels, k, cfg),
                       k, network.gap, cfg, meta)


def save_table(table: ExtensionTable, path: str | Path) -> None:
    """Serialize to a versioned JSON artifact (gzipped iff path ends in .gz)."""
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "k": table.k,
        "gap": table.gap,
        "split_config": {
            "local_split": table.split_config.local_split,
            "global_split": table.split_config.global_split,
            "origin": table.split_config.origin,
        },
        "split_meta": [
            {"label_count": m.label_count, "width": m.width,
             "label_names": list(m.label_names)}
            for m in table.split_meta
        ],
        "counts": [
            {key: exts for key, exts in sorted(keymap.items())}
            for keymap in table.counts
        ],
    }
    path = Path(path)
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    if path.suffix == ".gz":
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def load_table(path: str | Path) -> ExtensionTable:
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = json.loads(path.read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME:
        raise ValueError(f"{path}: not a {FORMAT_NAME} artifact")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {doc.get('version')}")
    sc = doc["split_config"]
    cfg = SplitConfig(sc["local_split"], sc["global_split"], sc["origin"])
    meta = tuple(SplitMeta(m["label_count"], m["width"], tuple(m["label_names"]))
                 for m in doc["split_meta"])
    counts = [{key: {e: int(n) for e, n in exts.items()}
               for key, exts in keymap.items()}
              for keymap in doc["counts"]]
    return ExtensionTable(doc["k"], doc["gap"], cfg, meta, counts)


def table_stats(table: ExtensionTable) -> dict:
    return table.stats()
