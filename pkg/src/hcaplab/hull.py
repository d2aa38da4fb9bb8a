"""Compact H-hulls built as unions of grounded primitives.

A hull is an immutable, ordered tuple of primitives. Every query is a
min/max reduction over the primitives, so overlapping pieces are fine.

Geometric conventions
---------------------
* ``Rect(x_lo, x_hi, h)`` is ``(x_lo, x_hi) x (0, h]``: top edge included,
  vertical sides excluded.
* ``HalfDisk(x0, r)`` is ``{z in H : |z - x0| <= r}``.
* ``VSlit(x0, h)`` is the segment ``{x0 + iy : 0 < y <= h}``.
* ``Slit(foot, vertices)`` is the polyline ``(foot, 0) -> v1 -> ... -> vn``
  with every vertex strictly above the real axis.

Membership of slits uses the thickness ``SLIT_DELTA``; distances and the
tangent-disk excess use the exact polyline.

The tangent excess of a point ``w`` is ``F(w) = sup_{z in A} (Im z)^2 - |w - z|^2``;
``w`` lies in the union of the disks ``B(z, Im z)`` iff ``F(w) > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

import numpy as np

SLIT_DELTA = 1e-9

__all__ = [
    "SLIT_DELTA",
    "HullError",
    "Point",
    "Rect",
    "HalfDisk",
    "VSlit",
    "Slit",
    "Hull",
    "Box",
]


class HullError(ValueError):
    """Raised for primitives or hulls that violate the hull invariants."""


class Point(NamedTuple):
    x: float
    y: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


class Box(NamedTuple):
    """Axis-aligned closed box ``[x_lo, x_hi] x [y_lo, y_hi]`` (array fields allowed)."""

    x_lo: np.ndarray
    x_hi: np.ndarray
    y_lo: np.ndarray
    y_hi: np.ndarray


def _finite(*vals: float) -> bool:
    return all(math.isfinite(v) for v in vals)


def _interval_gap(lo, hi, a, b):
    """Distance between the intervals [lo, hi] and [a, b] (elementwise)."""
    return np.maximum(np.maximum(lo - b, a - hi), 0.0)


def _dist_to_interval(t, lo, hi):
    return np.maximum(np.maximum(lo - t, t - hi), 0.0)


def _farthest_sq(zx, zy, box: Box):
    """Squared distance from (zx, zy) to the farthest corner of ``box``."""
    fx = np.maximum(np.abs(zx - box.x_lo), np.abs(zx - box.x_hi))
    fy = np.maximum(np.abs(zy - box.y_lo), np.abs(zy - box.y_hi))
    return fx * fx + fy * fy


# ---------------------------------------------------------------- segments


def _seg_dist(x, y, x1, y1, x2, y2):
    vx, vy = x2 - x1, y2 - y1
    ll = vx * vx + vy * vy
    if ll == 0.0:
        return np.hypot(x - x1, y - y1)
    t = np.clip(((x - x1) * vx + (y - y1) * vy) / ll, 0.0, 1.0)
    return np.hypot(x - (x1 + t * vx), y - (y1 + t * vy))


def _seg_excess(x, y, x1, y1, x2, y2):
    """Pointwise sup over the segment of (Im z)^2 - |w - z|^2 and its maximiser."""
    vx, vy = x2 - x1, y2 - y1
    ex = x1 - x
    # f(t) = -(ex + t vx)^2 + 2 y (y1 + t vy) - y^2, concave in t
    if vx != 0.0:
        t = np.clip((y * vy - ex * vx) / (vx * vx), 0.0, 1.0)
    else:
        t = np.where(y * vy > 0.0, 1.0, 0.0)
    zx = x1 + t * vx
    zy = y1 + t * vy
    f = -(zx - x) ** 2 + 2.0 * y * zy - y * y
    return f, zx, zy


def _seg_excess_hi(box: Box, x1, y1, x2, y2):
    """Exact ``sup_{z in seg} (Im z)^2 - dist(z, box)^2`` for each box.

    Along the segment the objective is piecewise quadratic in the
    parameter, with breakpoints where the segment crosses the box's
    edge lines; the maximum sits at a breakpoint, an end, or a piece vertex.
    """
    vx, vy = x2 - x1, y2 - y1
    shape = np.shape(box.x_lo)
    cands = [np.zeros(shape), np.ones(shape)]
    for lo, p, v in ((box.x_lo, x1, vx), (box.x_hi, x1, vx), (box.y_lo, y1, vy), (box.y_hi, y1, vy)):
        if v != 0.0:
            cands.append(np.clip((lo - p) / v, 0.0, 1.0))
        else:
            cands.append(np.zeros(shape))
    brk = np.sort(np.stack(cands, axis=-1), axis=-1)
    tm = 0.5 * (brk[..., :-1] + brk[..., 1:])
    xm = x1 + tm * vx
    ym = y1 + tm * vy
    bxl, bxh = box.x_lo[..., None], box.x_hi[..., None]
    byl, byh = box.y_lo[..., None], box.y_hi[..., None]
    # linear forms a + b t for the x and y gaps on each piece
    ax = np.where(xm < bxl, bxl - x1, np.where(xm > bxh, x1 - bxh, 0.0))
    bx = np.where(xm < bxl, -vx, np.where(xm > bxh, vx, 0.0))
    ay = np.where(ym < byl, byl - y1, np.where(ym > byh, y1 - byh, 0.0))
    by = np.where(ym < byl, -vy, np.where(ym > byh, vy, 0.0))
    qa = vy * vy - bx * bx - by * by
    qb = 2.0 * (y1 * vy - ax * bx - ay * by)
    with np.errstate(divide="ignore", invalid="ignore"):
        tv = np.where(qa < 0.0, -qb / (2.0 * qa), brk[..., :-1])
    tv = np.clip(tv, brk[..., :-1], brk[..., 1:])
    ts = np.concatenate([brk, tv], axis=-1)
    zx = x1 + ts * vx
    zy = y1 + ts * vy
    dx = _dist_to_interval(zx, bxl, bxh)
    dy = _dist_to_interval(zy, byl, byh)
    return np.max(zy * zy - dx * dx - dy * dy, axis=-1)


# -------------------------------------------------------------- primitives


@dataclass(frozen=True)
class Rect:
    x_lo: float
    x_hi: float
    h: float

    kind = "rect"

    def __post_init__(self):
        if not _finite(self.x_lo, self.x_hi, self.h):
            raise HullError("rect: non-finite coordinate")
        if not self.x_lo < self.x_hi:
            raise HullError(f"rect: need x_lo < x_hi, got {self.x_lo} >= {self.x_hi}")
        if not self.h > 0:
            raise HullError(f"rect: height must be positive, got {self.h}")

    @property
    def sup_im(self) -> float:
        return self.h

    @property
    def extent(self) -> tuple[float, float]:
        return self.x_lo, self.x_hi

    def scale(self, r: float) -> "Rect":
        return Rect(r * self.x_lo, r * self.x_hi, r * self.h)

    def translate(self, dx: float) -> "Rect":
        return Rect(self.x_lo + dx, self.x_hi + dx, self.h)

    def contains(self, x, y):
        return (x > self.x_lo) & (x < self.x_hi) & (y > 0) & (y <= self.h)

    def dist(self, x, y):
        dx = _dist_to_interval(x, self.x_lo, self.x_hi)
        dy = _dist_to_interval(y, 0.0, self.h)
        return np.hypot(dx, dy)

    def excess(self, x, y):
        zx = np.clip(x, self.x_lo, self.x_hi)
        zy = np.where(y > 0, self.h, 0.0)
        f = -(x - zx) ** 2 + 2.0 * y * zy - y * y
        return f, zx, zy

    def excess_hi(self, box: Box, at_center=None):
        gap = _interval_gap(self.x_lo, self.x_hi, box.x_lo, box.x_hi)
        g0 = -_dist_to_interval(0.0, box.y_lo, box.y_hi) ** 2
        gh = self.h**2 - _dist_to_interval(self.h, box.y_lo, box.y_hi) ** 2
        return np.maximum(g0, gh) - gap * gap

    def to_dict(self) -> dict:
        return {"kind": "rect", "x_lo": self.x_lo, "x_hi": self.x_hi, "h": self.h}


@dataclass(frozen=True)
class VSlit:
    x0: float
    h: float

    kind = "vslit"

    def __post_init__(self):
        if not _finite(self.x0, self.h):
            raise HullError("vslit: non-finite coordinate")
        if not self.h > 0:
            raise HullError(f"vslit: height must be positive, got {self.h}")

    @property
    def sup_im(self) -> float:
        return self.h

    @property
    def extent(self) -> tuple[float, float]:
        return self.x0, self.x0

    def scale(self, r: float) -> "VSlit":
        return VSlit(r * self.x0, r * self.h)

    def translate(self, dx: float) -> "VSlit":
        return VSlit(self.x0 + dx, self.h)

    def segments(self) -> list[tuple[float, float, float, float]]:
        return [(self.x0, 0.0, self.x0, self.h)]

    def contains(self, x, y):
        return (np.abs(x - self.x0) <= SLIT_DELTA) & (y > 0) & (y <= self.h)

    def dist(self, x, y):
        return np.hypot(x - self.x0, _dist_to_interval(y, 0.0, self.h))

    def excess(self, x, y):
        zx = np.full(np.shape(x), self.x0, dtype=float)
        zy = np.where(y > 0, self.h, 0.0)
        f = -(x - zx) ** 2 + 2.0 * y * zy - y * y
        return f, zx, zy

    def excess_hi(self, box: Box, at_center=None):
        gap = _interval_gap(self.x0, self.x0, box.x_lo, box.x_hi)
        g0 = -_dist_to_interval(0.0, box.y_lo, box.y_hi) ** 2
        gh = self.h**2 - _dist_to_interval(self.h, box.y_lo, box.y_hi) ** 2
        return np.maximum(g0, gh) - gap * gap

    def to_dict(self) -> dict:
        return {"kind": "vslit", "x0": self.x0, "h": self.h}


@dataclass(frozen=True)
class HalfDisk:
    x0: float
    r: float

    kind = "halfdisk"

    def __post_init__(self):
        if not _finite(self.x0, self.r):
            raise HullError("halfdisk: non-finite coordinate")
        if not self.r > 0:
            raise HullError(f"halfdisk: radius must be positive, got {self.r}")

    @property
    def sup_im(self) -> float:
        return self.r

    @property
    def extent(self) -> tuple[float, float]:
        return self.x0 - self.r, self.x0 + self.r

    def scale(self, r: float) -> "HalfDisk":
        return HalfDisk(r * self.x0, r * self.r)

    def translate(self, dx: float) -> "HalfDisk":
        return HalfDisk(self.x0 + dx, self.r)

    def contains(self, x, y):
        return (y > 0) & ((x - self.x0) ** 2 + y * y <= self.r * self.r)

    def dist(self, x, y):
        upper = np.maximum(np.hypot(x - self.x0, y) - self.r, 0.0)
        lower = np.hypot(_dist_to_interval(x, self.x0 - self.r, self.x0 + self.r), y)
        return np.where(y >= 0, upper, lower)

    def _arc(self, x, y, n_iter: int = 40):
        """Arc maximiser by bisection; also returns the slack ``F(w) - f <= slack``."""
        r, d = self.r, x - self.x0
        # Above the axis the sup is attained on the arc z = x0 + r e^{i phi};
        # the stationarity condition is monotone in phi, so bisect on it.
        lo = np.zeros(x.shape)
        hi = np.full(x.shape, math.pi)
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            k = (d - r * np.cos(mid)) * np.sin(mid) - y * np.cos(mid)
            neg = k < 0
            lo = np.where(neg, mid, lo)
            hi = np.where(neg, hi, mid)
        phi = 0.5 * (lo + hi)
        ax = self.x0 + r * np.cos(phi)
        ay = r * np.sin(phi)
        f = -(ax - x) ** 2 + 2.0 * y * ay - y * y
        # |df/dphi| <= 2 r (|d| + r + y) on the bracket
        slack = 2.0 * r * (np.abs(d) + r + np.abs(y)) * (hi - lo)
        return f, ax, ay, slack

    def excess(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        r = self.r
        f_arc, ax, ay, _ = self._arc(x, y, 64)
        bx = np.clip(x, self.x0 - r, self.x0 + r)
        f_base = -(bx - x) ** 2 - y * y
        up = y > 0
        return (np.where(up, f_arc, f_base), np.where(up, ax, bx), np.where(up, ay, 0.0))

    def excess_hi(self, box: Box, at_center=None):
        cx = 0.5 * (box.x_lo + box.x_hi)
        cy = 0.5 * (box.y_lo + box.y_hi)
        rho = 0.5 * np.hypot(box.x_hi - box.x_lo, box.y_hi - box.y_lo)
        if at_center is None:
            at_center = self._arc(cx, np.maximum(cy, 0.0))
        fc, _, _, slack = at_center
        # f(z, w) <= f(z, c) + 2 rho |c - z| for |w - c| <= rho
        lip = fc + slack + 2.0 * rho * (np.hypot(cx - self.x0, cy) + self.r)
        enclosing = Rect(self.x0 - self.r, self.x0 + self.r, self.r).excess_hi(box)
        return np.minimum(lip, enclosing)

    def to_dict(self) -> dict:
        return {"kind": "halfdisk", "x0": self.x0, "r": self.r}


def _orient(ax, ay, bx, by, cx, cy):
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (v > 0) - (v < 0)


def _on_seg(ax, ay, bx, by, px, py):
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def _segments_cross(p1, p2, q1, q2) -> bool:
    o1 = _orient(*p1, *p2, *q1)
    o2 = _orient(*p1, *p2, *q2)
    o3 = _orient(*q1, *q2, *p1)
    o4 = _orient(*q1, *q2, *p2)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and _on_seg(*p1, *p2, *q1))
        or (o2 == 0 and _on_seg(*p1, *p2, *q2))
        or (o3 == 0 and _on_seg(*q1, *q2, *p1))
        or (o4 == 0 and _on_seg(*q1, *q2, *p2))
    )


@dataclass(frozen=True)
class Slit:
    foot: float
    vertices: tuple[tuple[float, float], ...]

    kind = "slit"

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        if verts and verts[0] == (float(self.foot), 0.0):
            verts = verts[1:]
        object.__setattr__(self, "vertices", verts)
        if not _finite(self.foot) or not all(_finite(x, y) for x, y in verts):
            raise HullError("slit: non-finite coordinate")
        if not verts:
            raise HullError("slit: needs at least one vertex above the axis")
        for i, (_, y) in enumerate(verts):
            if not y > 0:
                raise HullError(f"slit: vertex {i} has height {y} <= 0; only the foot may touch the axis")
        pts = self.points
        for i in range(len(pts) - 1):
            if pts[i] == pts[i + 1]:
                raise HullError(f"slit: repeated vertex at index {i}")
        n = len(pts) - 1
        for i in range(n):
            for j in range(i + 1, n):
                p1, p2, q1, q2 = pts[i], pts[i + 1], pts[j], pts[j + 1]
                if j == i + 1:
                    # adjacent edges may only share their common vertex
                    if _orient(*p1, *p2, *q2) == 0 and _on_seg(*p1, *p2, *q2):
                        raise HullError(f"slit: edges {i} and {j} overlap")
                    if _orient(*q1, *q2, *p1) == 0 and _on_seg(*q1, *q2, *p1):
                        raise HullError(f"slit: edges {i} and {j} overlap")
                    continue
                if _segments_cross(p1, p2, q1, q2):
                    raise HullError(f"slit: polyline self-intersects (edges {i} and {j})")

    @property
    def points(self) -> list[tuple[float, float]]:
        """All polyline points including the foot on the axis."""
        return [(float(self.foot), 0.0), *self.vertices]

    @property
    def sup_im(self) -> float:
        return max(y for _, y in self.vertices)

    @property
    def extent(self) -> tuple[float, float]:
        xs = [x for x, _ in self.points]
        return min(xs), max(xs)

    def scale(self, r: float) -> "Slit":
        return Slit(r * self.foot, tuple((r * x, r * y) for x, y in self.vertices))

    def translate(self, dx: float) -> "Slit":
        return Slit(self.foot + dx, tuple((x + dx, y) for x, y in self.vertices))

    def segments(self) -> list[tuple[float, float, float, float]]:
        pts = self.points
        return [(*pts[i], *pts[i + 1]) for i in range(len(pts) - 1)]

    def dist(self, x, y):
        return np.minimum.reduce([_seg_dist(x, y, *s) for s in self.segments()] + [np.full(np.shape(x), np.inf)])

    def contains(self, x, y):
        return (y > 0) & (self.dist(x, y) <= SLIT_DELTA)

    def excess(self, x, y):
        best = None
        for s in self.segments():
            f, zx, zy = _seg_excess(x, y, *s)
            if best is None:
                best = (f, zx, zy)
            else:
                better = f > best[0]
                best = tuple(np.where(better, a, b) for a, b in zip((f, zx, zy), best))
        return best

    def excess_hi(self, box: Box, at_center=None):
        return np.maximum.reduce([_seg_excess_hi(box, *s) for s in self.segments()])

    def to_dict(self) -> dict:
        return {"kind": "slit", "foot": self.foot, "vertices": [list(v) for v in self.vertices]}


Primitive = Union[Rect, HalfDisk, VSlit, Slit]

_KINDS = {"rect": Rect, "halfdisk": HalfDisk, "vslit": VSlit, "slit": Slit}


def primitive_from_dict(d: dict) -> Primitive:
    kind = d.get("kind")
    if kind not in _KINDS:
        raise HullError(f"unknown primitive kind {kind!r}")
    if kind == "slit":
        return Slit(float(d["foot"]), tuple(tuple(v) for v in d["vertices"]))
    fields = {k: float(v) for k, v in d.items() if k != "kind"}
    return _KINDS[kind](**fields)


# -------------------------------------------------------------------- hull


@dataclass(frozen=True)
class Hull:
    """Union of grounded primitives; immutable."""

    primitives: tuple

    def __init__(self, primitives: Iterable[Primitive]):
        prims = tuple(primitives)
        if not prims:
            raise HullError("hull needs at least one primitive")
        for p in prims:
            if not isinstance(p, (Rect, HalfDisk, VSlit, Slit)):
                raise HullError(f"not a hull primitive: {p!r}")
        object.__setattr__(self, "primitives", prims)

    @classmethod
    def of(cls, *primitives: Primitive) -> "Hull":
        return cls(primitives)

    @classmethod
    def from_dict(cls, d: dict) -> "Hull":
        return cls(primitive_from_dict(p) for p in d["primitives"])

    def to_dict(self) -> dict:
        return {"primitives": [p.to_dict() for p in self.primitives]}

    # ---- scalar geometry

    @property
    def sup_im(self) -> float:
        return max(p.sup_im for p in self.primitives)

    @property
    def extent(self) -> tuple[float, float]:
        lo, hi = zip(*(p.extent for p in self.primitives))
        return min(lo), max(hi)

    @property
    def center_x(self) -> float:
        lo, hi = self.extent
        return 0.5 * (lo + hi)

    def radius_about(self, x_c: float) -> float:
        """Radius of the smallest half-disk centred at ``x_c`` containing the hull."""
        r = 0.0
        for p in self.primitives:
            if isinstance(p, HalfDisk):
                r = max(r, abs(p.x0 - x_c) + p.r)
            elif isinstance(p, Rect):
                r = max(r, math.hypot(max(abs(p.x_lo - x_c), abs(p.x_hi - x_c)), p.h))
            else:
                for s in p.segments():
                    r = max(r, math.hypot(s[0] - x_c, s[1]), math.hypot(s[2] - x_c, s[3]))
        return r

    def scale(self, r: float) -> "Hull":
        if not r > 0:
            raise HullError(f"scale factor must be positive, got {r}")
        return Hull(p.scale(r) for p in self.primitives)

    def translate(self, dx: float) -> "Hull":
        return Hull(p.translate(dx) for p in self.primitives)

    # ---- predicates (scalar or array input)

    def contains(self, p, y=None):
        """Membership; pass a ``Point``/complex, or x and y (scalars or arrays)."""
        x, y = _xy(p, y)
        out = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for prim in self.primitives:
            out |= prim.contains(x, y)
        return _unwrap(out)

    def dist(self, p, y=None):
        """Euclidean distance to the hull; 0 for contained points."""
        x, y = _xy(p, y)
        d = np.minimum.reduce([np.broadcast_to(prim.dist(x, y), np.broadcast(x, y).shape) for prim in self.primitives])
        d = np.where(self.contains(x, y), 0.0, d)
        return _unwrap(d)

    def tangent_excess(self, p, y=None):
        """``F(w) = sup_{z in A} (Im z)^2 - |w - z|^2`` at the given point(s)."""
        x, y = _xy(p, y)
        f, _, _ = self.excess_argmax(x, y)
        return _unwrap(f)

    def excess_argmax(self, x, y):
        """Tangent excess together with a maximising hull point (arrays)."""
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        best = None
        for prim in self.primitives:
            f, zx, zy = prim.excess(x, y)
            f, zx, zy = (np.broadcast_to(a, x.shape) for a in (f, zx, zy))
            if best is None:
                best = (f, zx, zy)
            else:
                better = f > best[0]
                best = tuple(np.where(better, a, b) for a, b in zip((f, zx, zy), best))
        return best

    def excess_interval(self, box: Box) -> tuple[np.ndarray, np.ndarray]:
        """Certified bounds ``F_lo <= F(w) <= F_hi`` for all ``w`` in each box.

        ``F_lo`` comes from the disk of the maximiser at the box centre; ``F_hi``
        is exact for rectangles and polylines and a Lipschitz bound for
        half-disks.
        """
        box = Box(*(np.asarray(a, float) for a in box))
        cx = 0.5 * (box.x_lo + box.x_hi)
        cy = 0.5 * (box.y_lo + box.y_hi)
        lo = np.full(cx.shape, -np.inf)
        hi = np.full(cx.shape, -np.inf)
        for prim in self.primitives:
            if isinstance(prim, HalfDisk) and np.all(cy > 0):
                arc = prim._arc(cx, cy)
                _, zx, zy, _ = arc
                hi = np.maximum(hi, prim.excess_hi(box, arc))
            else:
                _, zx, zy = prim.excess(cx, cy)
                hi = np.maximum(hi, prim.excess_hi(box))
            lo = np.maximum(lo, zy * zy - _farthest_sq(zx, zy, box))
        return lo, hi

    def tangent_excess_box(self, x_lo, x_hi, y_lo, y_hi) -> tuple[float, float]:
        lo, hi = self.excess_interval(Box(*(np.asarray(v, float) for v in (x_lo, x_hi, y_lo, y_hi))))
        return _unwrap(lo), _unwrap(hi)

    # ---- kernel packing

    def packed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Contiguous ``(rects[n,3], disks[n,2], segs[n,4])`` arrays for the walk kernels."""
        rects, disks, segs = [], [], []
        for p in self.primitives:
            if isinstance(p, Rect):
                rects.append((p.x_lo, p.x_hi, p.h))
            elif isinstance(p, HalfDisk):
                disks.append((p.x0, p.r))
            else:
                segs.extend(p.segments())
        return (
            np.ascontiguousarray(np.array(rects, float).reshape(-1, 3)),
            np.ascontiguousarray(np.array(disks, float).reshape(-1, 2)),
            np.ascontiguousarray(np.array(segs, float).reshape(-1, 4)),
        )


def _xy(p, y):
    if y is not None:
        return np.asarray(p, float), np.asarray(y, float)
    if isinstance(p, complex):
        return np.asarray(p.real), np.asarray(p.imag)
    return np.asarray(p[0], float), np.asarray(p[1], float)


def _unwrap(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a
