"""Greedy covering of a hull by boxes ``R(z, 2c)`` and the bound sums built on it.

For ``z = x + iy`` write ``I(z, c) = (x - cy, x + cy)`` and
``R(z, c) = I(z, c) x (0, y]``. Starting from ``A_0 = A`` the greedy rule picks
a highest point ``z_{j+1}`` of ``A_j = A minus the union of R(z_k, 2c), k <= j``.
Heights are then non-increasing and the intervals ``I(z_j, c)`` are disjoint.

The maximisation runs over a finite candidate set per primitive:

* ``Rect``: top-edge points ``x_lo + k * grid`` for ``x < x_hi`` (left end
  included), each standing for the full column below it;
* ``HalfDisk``: arc points above the same kind of grid plus the apex;
* ``VSlit``: its tip;
* ``Slit``: points every ``grid`` of arc length along each edge, vertices included.

A column of height ``t`` is either fully covered by an earlier box (whose
height is ``>= t``) or not at all, so the recursion reduces to one sweep
in order of decreasing height.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .capacity import bound_constants
from .hull import HalfDisk, Hull, Point, Rect, Slit, VSlit

__all__ = ["CoverElement", "Cover", "CoverageReport", "CoverSums", "greedy_cover", "coverage_check",
           "cover_sums", "candidates"]

HCAP_RECT_BOUND = 3.5


@dataclass(frozen=True)
class CoverElement:
    z: Point
    c: float

    @property
    def x(self) -> float:
        return self.z.x

    @property
    def y(self) -> float:
        return self.z.y

    def interval(self, width: float = 1.0) -> tuple[float, float]:
        """``I(z, width * c)``."""
        h = width * self.c * self.y
        return self.x - h, self.x + h


class Cover(list):
    """List of :class:`CoverElement` with the construction parameters attached.

    ``truncation_bound`` bounds the sum of ``y_j^2`` over the points the
    recursion would still pick below ``eps_stop``; it is zero when the
    candidate set was exhausted.
    """

    def __init__(self, elements=(), *, c: float, grid: float, eps_stop: float, truncation_bound: float = 0.0):
        super().__init__(elements)
        self.c = c
        self.grid = grid
        self.eps_stop = eps_stop
        self.truncation_bound = truncation_bound

    def without_last(self) -> "Cover":
        return Cover(self[:-1], c=self.c, grid=self.grid, eps_stop=self.eps_stop,
                     truncation_bound=self.truncation_bound)

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [(j + 1, e.x, e.y, e.c) for j, e in enumerate(self)]


def _grid(lo: float, hi: float, pitch: float, left_closed: bool) -> np.ndarray:
    n = math.ceil((hi - lo) / pitch)
    xs = lo + pitch * np.arange(n + 1)
    xs = xs[xs < hi]
    return xs if left_closed else xs[xs > lo]


def candidates(hull: Hull, grid: float) -> np.ndarray:
    """Candidate array with rows ``(x, height, primitive index)``."""
    out = []
    for i, p in enumerate(hull.primitives):
        if isinstance(p, Rect):
            xs = _grid(p.x_lo, p.x_hi, grid, True)
            ys = np.full(xs.shape, p.h)
        elif isinstance(p, HalfDisk):
            xs = _grid(p.x0 - p.r, p.x0 + p.r, grid, False)
            xs = np.append(xs, p.x0)
            ys = np.sqrt(np.maximum(p.r * p.r - (xs - p.x0) ** 2, 0.0))
            ys[-1] = p.r
        elif isinstance(p, VSlit):
            xs, ys = np.array([p.x0]), np.array([p.h])
        else:
            pts = []
            for x1, y1, x2, y2 in p.segments():
                m = max(1, math.ceil(math.hypot(x2 - x1, y2 - y1) / grid))
                t = np.arange(1, m + 1) / m
                pts.append(np.column_stack([x1 + t * (x2 - x1), y1 + t * (y2 - y1)]))
                pts[-1][-1] = (x2, y2)
            xy = np.concatenate(pts)
            xs, ys = xy[:, 0], xy[:, 1]
        keep = ys > 0
        out.append(np.column_stack([xs[keep], ys[keep], np.full(int(keep.sum()), i, float)]))
    return np.concatenate(out)


def _inside_open(x: float, px: float, half: float, c: float, py: float) -> bool:
    """``|x - px| < 2 c py`` with an exact fallback near the boundary."""
    gap = abs(x - px) - half
    if abs(gap) > 1e-12 * (abs(half) + abs(x) + abs(px)):
        return gap < 0
    return abs(Fraction(x) - Fraction(px)) < 2 * Fraction(c) * Fraction(py)


def greedy_cover(hull: Hull, c: float, grid: float | None = None, eps_stop: float | None = None) -> Cover:
    """Run the greedy covering recursion on the hull's candidate points.

    Parameters
    ----------
    c : float
        Cover parameter; boxes ``R(z_j, 2c)`` are removed.
    grid : float, optional
        Candidate pitch, default ``sup_im / 512``.
    eps_stop : float, optional
        Heights below this end the recursion, default ``1e-6 * sup_im``.

    Ties in height go to the smaller ``x``, then to the earlier primitive.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    s = hull.sup_im
    grid = s / 512 if grid is None else float(grid)
    eps_stop = 1e-6 * s if eps_stop is None else float(eps_stop)
    if not grid > 0 or eps_stop < 0:
        raise ValueError("grid must be positive and eps_stop non-negative")
    cand = candidates(hull, grid)
    order = np.lexsort((cand[:, 2], cand[:, 0], -cand[:, 1]))
    cand = cand[order]
    px = np.empty(0)
    py = np.empty(0)
    ph = np.empty(0)
    picks: list[CoverElement] = []
    truncated = False
    for x, y, _ in cand:
        if y < eps_stop:
            truncated = True
            break
        if px.size:
            gap = np.abs(x - px) - ph
            hits = np.flatnonzero(gap <= 1e-12 * (np.abs(ph) + abs(x) + np.abs(px)))
            if any(_inside_open(x, px[k], ph[k], c, py[k]) for k in hits):
                continue
        picks.append(CoverElement(Point(float(x), float(y)), float(c)))
        px = np.append(px, x)
        py = np.append(py, y)
        ph = np.append(ph, 2.0 * c * y)
    trunc = 0.0
    if truncated and eps_stop > 0:
        lo, hi = hull.extent
        trunc = eps_stop * (hi - lo + 2 * c * eps_stop) / (2 * c)
    return Cover(picks, c=float(c), grid=grid, eps_stop=eps_stop, truncation_bound=trunc)


# ------------------------------------------------------------------ checks


@dataclass
class CoverageReport:
    n_samples: int
    violations: list  # (x, y, distance to the covered set)
    worst: float
    disjoint: bool
    monotone: bool
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def intervals_disjoint(cover) -> bool:
    """Exact check that the open intervals ``I(z_j, c)`` are pairwise disjoint."""
    iv = sorted(
        (Fraction(e.x) - Fraction(e.c) * Fraction(e.y), Fraction(e.x) + Fraction(e.c) * Fraction(e.y))
        for e in cover
    )
    return all(a[1] <= b[0] for a, b in zip(iv, iv[1:]))


def heights_monotone(cover) -> bool:
    return all(a.y >= b.y for a, b in zip(cover, cover[1:]))


def sample_hull(hull: Hull, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points per primitive, uniform on each (by area or arc length)."""
    out = []
    for p in hull.primitives:
        if isinstance(p, Rect):
            x = rng.uniform(p.x_lo, p.x_hi, n)
            y = p.h * (1.0 - rng.random(n))
        elif isinstance(p, HalfDisk):
            rad = p.r * np.sqrt(1.0 - rng.random(n))
            th = math.pi * rng.random(n)
            x, y = p.x0 + rad * np.cos(th), rad * np.sin(th)
        elif isinstance(p, VSlit):
            x, y = np.full(n, p.x0), p.h * (1.0 - rng.random(n))
        else:
            seg = np.array(p.segments())
            ln = np.hypot(seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1])
            k = rng.choice(len(seg), n, p=ln / ln.sum())
            t = 1.0 - rng.random(n)
            x = seg[k, 0] + t * (seg[k, 2] - seg[k, 0])
            y = seg[k, 1] + t * (seg[k, 3] - seg[k, 1])
        out.append(np.column_stack([x, y]))
    return np.concatenate(out)


def _dist_to_cover(x: np.ndarray, y: np.ndarray, cover) -> np.ndarray:
    best = np.full(x.shape, np.inf)
    for e in cover:
        lo, hi = e.interval(2.0)
        dx = np.maximum(np.maximum(lo - x, x - hi), 0.0)
        dy = np.maximum(y - e.y, 0.0)
        np.minimum(best, np.hypot(dx, dy), out=best)
    return best


def coverage_check(hull: Hull, cover: Cover, n_samples: int = 100_000, seed: int = 0) -> CoverageReport:
    """Sample the hull and measure how far sampled points sit outside the boxes ``R(z_j, 2c)``.

    A point counts as a violation when its distance to the closed boxes
    exceeds the cover's grid pitch; points below ``eps_stop`` are exempt.
    Disjointness and monotonicity are checked exactly.
    """
    rng = np.random.default_rng(seed)
    per = max(1, n_samples // len(hull.primitives))
    pts = sample_hull(hull, per, rng)
    x, y = pts[:, 0], pts[:, 1]
    d = _dist_to_cover(x, y, cover) if len(cover) else np.full(x.shape, np.inf)
    bad = (d > cover.grid) & (y >= cover.eps_stop)
    viol = [(float(a), float(b), float(e)) for a, b, e in zip(x[bad], y[bad], d[bad])]
    worst = float(np.max(np.where(y >= cover.eps_stop, d, 0.0))) if d.size else 0.0
    disjoint = intervals_disjoint(cover)
    monotone = heights_monotone(cover)
    return CoverageReport(int(x.size), viol, worst, disjoint, monotone, disjoint and monotone and not viol)


# -------------------------------------------------------------------- sums


@dataclass(frozen=True)
class CoverSums:
    """Bounds derived from ``S = sum y_j^2``.

    ``hsiz_lo = pi S`` holds for ``c >= 1`` and ``hcap_hi = K S`` for ``c == 1``;
    the two upper bounds also absorb the cover's truncation bound.
    """

    c: float
    sum_sq: float
    truncation: float
    hsiz_lo: float
    hsiz_hi: float
    hcap_lo: float
    hcap_hi: float
    hsiz_lo_valid: bool
    hcap_hi_valid: bool
    hcap_hi_rigorous: bool

    def to_dict(self) -> dict:
        return asdict(self)


def cover_sums(cover: Cover, K: float = HCAP_RECT_BOUND, rigorous: bool = True) -> CoverSums:
    """Sum the squared heights of a cover and scale them into ``hsiz`` and ``hcap`` bounds.

    ``K`` is the capacity of ``R(i, 2)`` used for the upper capacity bound; pass
    a measured value with ``rigorous=False`` to label it accordingly.
    """
    if not len(cover):
        raise ValueError("cover is empty")
    c = cover[0].c
    s = math.fsum(e.y * e.y for e in cover)
    t = getattr(cover, "truncation_bound", 0.0)
    rho = bound_constants(c).rho
    return CoverSums(
        c=c,
        sum_sq=s,
        truncation=t,
        hsiz_lo=math.pi * s,
        hsiz_hi=(math.pi + 8 * c) * (s + t),
        hcap_lo=rho * rho * s,
        hcap_hi=K * (s + t),
        hsiz_lo_valid=c >= 1,
        hcap_hi_valid=c == 1,
        hcap_hi_rigorous=rigorous,
    )
