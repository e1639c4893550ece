"""Counter-based pseudo-randomness.

Every draw is a pure function of (seed, index, stream), so sampling can be
sharded across threads or processes in any order without changing a single
bit of output. The mixer is the splitmix64 finalizer over a Weyl sequence,
which is the standard construction for this kind of stateless stream.
"""
from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xD1B54A32D192ED03
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(v: np.ndarray) -> np.ndarray:
    v = (v ^ (v >> np.uint64(30))) * _MIX1
    v = (v ^ (v >> np.uint64(27))) * _MIX2
    return v ^ (v >> np.uint64(31))


def hash_words(seed: int, start: int, count: int, stream: int = 0) -> np.ndarray:
    """uint64 words for counters start..start+count-1 of one stream."""
    # Offsets folded together in Python ints to avoid uint64 scalar overflow warnings.
    base = (seed * _GOLDEN + (stream + 1) * _STREAM_SALT + (start + 1) * _GOLDEN) & _MASK
    idx = np.arange(count, dtype=np.uint64)
    return _mix(np.uint64(base) + idx * np.uint64(_GOLDEN))


def uniforms(seed: int, start: int, count: int, stream: int = 0) -> np.ndarray:
    """`count` doubles uniform on [0, 1), indexed deterministically."""
    return (hash_words(seed, start, count, stream) >> np.uint64(11)) * 2.0**-53
