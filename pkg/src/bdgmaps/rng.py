"""Reproducible random streams.

All randomness goes through :class:`numpy.random.Philox` (a counter-based
generator) keyed by a :class:`numpy.random.SeedSequence`. A stream is named
by ``(seed, stream, block)``:

* ``stream`` separates unrelated consumers (tree sampling, snake paths, ...)
  so that adding draws to one never shifts another;
* ``block`` indexes a fixed-size chunk of work. Parallel runs hand out
  blocks, not workers, so the output does not depend on the thread count.
"""

from __future__ import annotations

import numpy as np

STREAM_SAMPLE = 1
STREAM_SNAKE = 2
STREAM_CONSTANTS = 3
STREAM_EXPERIMENT = 4
STREAM_TEST = 99


def make_rng(seed: int, stream: int = STREAM_SAMPLE, block: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(block)))
    return np.random.Generator(np.random.Philox(ss))


def as_rng(rng) -> np.random.Generator:
    """Accept a Generator, an int seed, or None (fresh OS entropy)."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.Generator(np.random.Philox())
    return make_rng(int(rng))
