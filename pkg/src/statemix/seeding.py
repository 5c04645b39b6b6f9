"""Deterministic random streams.

All randomness in the package flows from a single 64-bit root seed.  Child
streams are derived as ``SeedSequence(root, spawn_key=path)`` where ``path`` is
a short tuple of integers naming the consumer; the same (root, path) pair
always reproduces the same stream and distinct paths are statistically
independent.  Components that accept a ``seed`` argument also accept an
already-constructed ``numpy.random.Generator``.
"""

from __future__ import annotations

import numpy as np

# stream labels used by the CLI and demo runner
STREAM_DECOMPOSE = 1
STREAM_MEASURE = 2
STREAM_COINS = 3
STREAM_SEA = 4
STREAM_DEMO = 5


def stream(seed: int, *path: int) -> np.random.Generator:
    """Child generator for (root seed, path)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.default_rng(ss)


def as_generator(seed) -> np.random.Generator:
    """Coerce an int seed or an existing Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return stream(int(seed))
