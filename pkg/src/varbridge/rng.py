"""Reproducible per-replicate random streams.

Replicate r of a run seeded with s draws from ``Philox(key=(s, r))``: a
counter-based, splittable 64-bit generator whose key IS the documented
stream-derivation hash.  Streams for distinct replicates are independent, and
a replicate's output never depends on how many other replicates run or in
what order, so serial and parallel execution agree bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import OutOfRangeError

_U64_MAX = 2**64 - 1


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise OutOfRangeError("seed", f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= _U64_MAX:
        raise OutOfRangeError("seed", f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def replicate_stream(seed: int, replicate: int) -> np.random.Generator:
    """Generator for one replicate; key = (run seed, replicate index)."""
    key = np.array([seed, replicate], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
