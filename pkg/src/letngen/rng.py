"""Deterministic child-seed derivation.

All randomness in a run flows from one master seed. Children are derived by
hashing the component name and index into the seed, so parallel workers and
reruns agree bit-exactly regardless of scheduling.
"""

from __future__ import annotations

import hashlib
import random


def child_seed(master: int, *parts: object) -> int:
    """Derive a 63-bit child seed from (master, component name, indices)."""
    tag = ":".join([str(master), *map(str, parts)])
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def child_rng(master: int, *parts: object) -> random.Random:
    return random.Random(child_seed(master, *parts))
