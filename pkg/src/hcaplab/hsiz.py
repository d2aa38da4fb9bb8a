"""Area of the union of disks ``B(z, Im z)`` over hull points ``z``.

A disk centred at height ``y <= s = sup_im`` with radius ``y`` stays inside
``[x_min - s, x_max + s] x [0, 2s]``, which is the region both the
quadtree and the Monte Carlo estimator work on.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .hull import Box, Hull
from .rng import path_keys, seed_key, uniforms

__all__ = ["AreaResult", "BudgetExceeded", "hsiz_rect", "hsiz_quadtree", "hsiz_mc", "union_box"]

MAX_CELLS = 10**7


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class AreaResult:
    value: float
    error_bound: float
    method: str
    cells_or_samples: int

    def interval(self) -> tuple[float, float]:
        return self.value - self.error_bound, self.value + self.error_bound

    def to_dict(self) -> dict:
        return asdict(self)


def hsiz_rect(y: float, c: float) -> float:
    """Tangent-disk area of ``R(z, 2c) = (x - 2cy, x + 2cy) x (0, y]``: ``(pi + 8c) y^2``."""
    if not (y > 0 and c > 0):
        raise ValueError("y and c must be positive")
    return (math.pi + 8.0 * c) * y * y


def union_box(hull: Hull) -> tuple[float, float, float, float]:
    s = hull.sup_im
    x_min, x_max = hull.extent
    return x_min - s, x_max + s, 0.0, 2.0 * s


def hsiz_quadtree(hull: Hull, tol: float = 1e-3, max_cells: int = MAX_CELLS) -> AreaResult:
    """Certified area by breadth-first subdivision.

    Cells whose excess interval is entirely positive are inside, entirely
    non-positive outside; the rest are split into four until the ambiguous
    area drops below ``tol``. Half the ambiguous area is credited to the
    value and the other half is the (rigorous) error bound.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    x0, x1, y0, y1 = union_box(hull)
    side = 0.5 * (y1 - y0)
    nx = math.ceil((x1 - x0) / side)
    gx, gy = np.meshgrid(np.arange(nx), np.arange(4), indexing="ij")
    xl = x0 + side * gx.ravel().astype(float)
    yl = y0 + side * gy.ravel().astype(float)
    inside_cells = 0.0
    evaluated = 0
    while True:
        lo, hi = hull.excess_interval(Box(xl, xl + side, yl, yl + side))
        evaluated += xl.size
        inside = lo > 0
        amb = ~inside & (hi > 0)
        inside_cells += np.count_nonzero(inside) * side * side
        n_amb = int(np.count_nonzero(amb))
        amb_area = n_amb * side * side
        if amb_area < tol:
            break
        if evaluated + 4 * n_amb > max_cells:
            raise BudgetExceeded(
                f"quadtree needs more than {max_cells} cells for tol={tol} (ambiguous area {amb_area:.3g})"
            )
        half = 0.5 * side
        xa, ya = xl[amb], yl[amb]
        xl = np.concatenate([xa, xa + half, xa, xa + half])
        yl = np.concatenate([ya, ya, ya + half, ya + half])
        side = half
    return AreaResult(inside_cells + 0.5 * amb_area, 0.5 * amb_area, "quadtree", evaluated)


def hsiz_mc(hull: Hull, n_samples: int = 1_000_000, seed: int = 0, chunk: int = 1 << 17) -> AreaResult:
    """Uniform sampling of the covering box; error bound is three binomial sigmas."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    x0, x1, y0, y1 = union_box(hull)
    key = seed_key(seed)
    hits = 0
    for s in range(0, n_samples, chunk):
        idx = np.arange(s, min(s + chunk, n_samples), dtype=np.uint64)
        pk = path_keys(key, idx)
        x = x0 + (x1 - x0) * uniforms(pk, 0)
        y = y0 + (y1 - y0) * uniforms(pk, 1)
        hits += int(np.count_nonzero(hull.tangent_excess(x, y) > 0))
    area = (x1 - x0) * (y1 - y0)
    p = hits / n_samples
    return AreaResult(area * p, 3.0 * area * math.sqrt(p * (1 - p) / n_samples), "mc", n_samples)
