"""Counter-based, splittable random streams.

Every sampling routine takes an explicit ``numpy.random.Generator``.  Streams
built here use the Philox counter-based bit generator keyed by a
``SeedSequence``; replication ``r`` of an experiment seeded with ``seed`` uses
``stream(seed, r)`` so that results do not depend on execution order or on
the number of worker threads.
"""

from __future__ import annotations

import numpy as np

RandomStream = np.random.Generator


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the deterministic sub-stream of ``seed`` addressed by ``path``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def split(rng: np.random.Generator, count: int) -> list[np.random.Generator]:
    """Derive ``count`` independent child streams from ``rng``."""
    return list(rng.spawn(count))


def as_stream(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.Generator(np.random.Philox())
    return stream(int(rng))
