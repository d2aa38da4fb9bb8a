"""Counter-based uniforms shared by the compiled and numpy walk kernels.

Draw ``k`` of path ``p`` under seed ``s`` is a pure function of
``(s, p, k)``: the splitmix64 finaliser applied to a per-path key plus a
Weyl increment. Paths can therefore be processed in any order, in any
chunking, on any number of workers, and still see the same numbers.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
PATH_MULT = 0xD1B54A32D192ED03
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO_M53 = 2.0**-53


def seed_key(seed: int) -> int:
    """Fold an arbitrary Python integer seed into a 64-bit key."""
    return mix64_int(int(seed) & MASK64)


def mix64_int(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def path_keys(key: int, paths: np.ndarray) -> np.ndarray:
    """Per-path stream keys for absolute path indices ``paths``."""
    p = np.asarray(paths, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(key) + (p + np.uint64(1)) * np.uint64(PATH_MULT))


def uniforms(pkeys: np.ndarray, k) -> np.ndarray:
    """Uniform doubles in (0, 1) for draw index ``k`` (scalar or array)."""
    with np.errstate(over="ignore"):
        z = mix64(pkeys + (np.asarray(k, dtype=np.uint64) + np.uint64(1)) * np.uint64(GOLDEN))
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53
