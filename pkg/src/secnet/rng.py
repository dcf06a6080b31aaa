"""Counter-based random streams.

Every random number is a pure function of ``(seed, trial, tag, index)``:
the stream for ``(seed, trial, tag)`` is a SplitMix64 sequence whose
starting state is obtained by hashing the three integers with the SplitMix64
finalizer, and draw ``i`` is ``mix64(key + (i + 1) * GAMMA)``. No state is
shared between trials, so any partition of the trials over workers gives the
same numbers. The same arithmetic is implemented in the compiled kernels.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# sub-stream tags; hop k of an end-to-end trial uses tag k
TAG_EAVESDROPPER = 1 << 32
TAG_EAV_INTERFERENCE = (1 << 32) + 1
TAG_AUDIT = (1 << 32) + 2

_U64 = np.uint64
_TWO_M53 = 2.0 ** -53


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def seed_hash(seed: int) -> int:
    return mix64((seed & MASK64) + GAMMA)


def stream_key(seed: int, trial: int, tag: int) -> int:
    h = mix64(seed_hash(seed) ^ (trial & MASK64))
    return mix64(h ^ (tag & MASK64))


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _U64(_M1)
    z = (z ^ (z >> _U64(27))) * _U64(_M2)
    return z ^ (z >> _U64(31))


def keys_from_hash(hashed_seed: int, trials: np.ndarray, tag: int) -> np.ndarray:
    """Vectorized :func:`stream_key` given ``seed_hash(seed)``."""
    t = np.asarray(trials, dtype=np.uint64)
    with np.errstate(over="ignore"):
        k = _mix64_array(_U64(hashed_seed) ^ t)
        return _mix64_array(k ^ _U64(tag & MASK64))


def stream_keys(seed: int, trials: np.ndarray, tag: int) -> np.ndarray:
    return keys_from_hash(seed_hash(seed), trials, tag)


def uniforms_at(keys: np.ndarray, index: int) -> np.ndarray:
    """Draw number ``index`` of every stream in ``keys``, as a double in (0, 1)."""
    offset = _U64(((index + 1) * GAMMA) & MASK64)
    with np.errstate(over="ignore"):
        z = _mix64_array(keys + offset)
    return ((z >> _U64(11)).astype(np.float64) + 0.5) * _TWO_M53


def uniform_scalar(key: int, index: int) -> float:
    z = mix64(key + (index + 1) * GAMMA)
    return ((z >> 11) + 0.5) * _TWO_M53


class CounterStream:
    """One ``(seed, trial, tag)`` stream with a moving draw counter."""

    def __init__(self, seed: int, trial: int = 0, tag: int = 0) -> None:
        self.key = stream_key(seed, trial, tag)
        self.counter = 0

    def uniform(self, n: int) -> np.ndarray:
        idx = np.arange(self.counter, self.counter + n, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            z = _mix64_array(_U64(self.key) + (idx + _U64(1)) * _U64(GAMMA))
        return ((z >> _U64(11)).astype(np.float64) + 0.5) * _TWO_M53

    def exponential(self, n: int) -> np.ndarray:
        return -np.log(self.uniform(n))
