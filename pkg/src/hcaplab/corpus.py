"""Seeded random hulls for the verification suites.

Each hull has 1 to 5 primitives. Heights are log-uniform on ``[0.1, 2]`` and
feet uniform on ``[-5, 5]``. Kinds are drawn uniformly from rect, half-disk,
vertical slit and polyline slit:

* ``Rect``: half-width ``h * U(0.1, 2)`` around the foot;
* ``HalfDisk``: radius ``h``;
* ``VSlit``: height ``h``;
* ``Slit``: 1 to 3 vertices with strictly increasing heights ending at ``h``,
  each step drifting sideways by ``U(-h/2, h/2)``.

Rects, half-disks and vertical slits are unions of vertical columns, so any
overlap among them keeps the complement simply connected. Polyline slits
are placed (by resampling the foot, up to 100 tries) so that their
horizontal extent avoids every other primitive's; a slit that cannot be
placed is dropped.
"""
from __future__ import annotations

import math

import numpy as np

from .hull import HalfDisk, Hull, Rect, Slit, VSlit

__all__ = ["random_hull", "random_corpus", "random_rect", "H_RANGE", "FOOT_RANGE"]

H_RANGE = (0.1, 2.0)
FOOT_RANGE = (-5.0, 5.0)
KINDS = ("rect", "halfdisk", "vslit", "slit")


def _height(rng: np.random.Generator) -> float:
    return float(math.exp(rng.uniform(math.log(H_RANGE[0]), math.log(H_RANGE[1]))))


def random_rect(rng: np.random.Generator) -> Rect:
    h = _height(rng)
    foot = float(rng.uniform(*FOOT_RANGE))
    hw = h * float(rng.uniform(0.1, 2.0))
    return Rect(foot - hw, foot + hw, h)


def _slit_shape(rng: np.random.Generator, h: float) -> list[tuple[float, float]]:
    nv = int(rng.integers(1, 4))
    ys = np.sort(rng.uniform(0.0, h, nv - 1))
    ys = np.append(ys, h)
    dx = np.cumsum(rng.uniform(-0.5 * h, 0.5 * h, nv))
    return [(float(a), float(b)) for a, b in zip(dx, ys)]


def _overlaps(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def random_hull(rng: np.random.Generator) -> Hull:
    n = int(rng.integers(1, 6))
    kinds = [KINDS[int(k)] for k in rng.integers(0, len(KINDS), n)]
    prims = []
    for kind in kinds:
        if kind == "rect":
            prims.append(random_rect(rng))
        elif kind == "halfdisk":
            prims.append(HalfDisk(float(rng.uniform(*FOOT_RANGE)), _height(rng)))
        elif kind == "vslit":
            prims.append(VSlit(float(rng.uniform(*FOOT_RANGE)), _height(rng)))
    for kind in kinds:
        if kind != "slit":
            continue
        shape = _slit_shape(rng, _height(rng))
        for _ in range(100):
            foot = float(rng.uniform(*FOOT_RANGE))
            cand = Slit(foot, tuple((foot + dx, y) for dx, y in shape))
            if not any(_overlaps(cand.extent, p.extent) for p in prims):
                prims.append(cand)
                break
    if not prims:
        prims.append(VSlit(float(rng.uniform(*FOOT_RANGE)), _height(rng)))
    return Hull(prims)


def random_corpus(n: int, seed: int = 0) -> list[tuple[str, Hull]]:
    """``n`` hulls, independent streams spawned from ``seed``; ids ``rand-<seed>-<i>``."""
    streams = np.random.SeedSequence(seed).spawn(n)
    return [(f"rand-{seed}-{i:03d}", random_hull(np.random.Generator(np.random.PCG64(s))))
            for i, s in enumerate(streams)]
