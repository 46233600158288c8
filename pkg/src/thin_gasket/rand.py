"""Deterministic random streams.

Every sampling routine derives its generator from (seed, stream id) through
a counter-based bit generator, so results are reproducible regardless of
how many streams run or in which order they are consumed.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, stream_id: int) -> np.random.Generator:
    """Independent generator keyed by (seed, stream_id)."""
    key = ((int(seed) & _MASK64) << 64) | (int(stream_id) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))
