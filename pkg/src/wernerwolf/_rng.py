"""Counter-based random streams.

Every stream is a Philox generator keyed by a tuple of integers, so
``stream(seed, i)`` for sample ``i`` is reproducible regardless of the
order or process in which samples are drawn.
"""
from __future__ import annotations

import numpy as np


def as_key(seed) -> tuple[int, ...]:
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed)
    return (int(seed),)


def stream(*parts) -> np.random.Generator:
    key: list[int] = []
    for p in parts:
        key.extend(as_key(p))
    if any(k < 0 for k in key):
        raise ValueError("seed components must be non-negative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))
