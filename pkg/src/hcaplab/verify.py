"""Numerical checks of the comparability ``hsiz/66 < hcap <= 7 hsiz / (2 pi)``.

Intervals are "rigorous or 3 sigma": quadtree areas and exact capacities are
rigorous, zipper capacities carry their refinement bound, Monte Carlo
capacities carry ``3 sigma + bias_bound``. Each report labels which kind it
used, and a sandwich that straddles a bound is *inconclusive*, never failed.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _walk
from .capacity import (
    CapEstimate,
    bound_constants,
    bound_constants_mp,
    has_exact,
    hcap_exact,
    hcap_integral,
    hcap_wos,
)
from .corpus import random_corpus, random_rect
from .cover import coverage_check, cover_sums, greedy_cover
from .hsiz import AreaResult, hsiz_mc, hsiz_quadtree
from .hull import HalfDisk, Hull, Rect, Slit, VSlit
from .loewner import hcap_zipper

__all__ = [
    "LOWER",
    "UPPER",
    "Budget",
    "BUDGETS",
    "TheoremReport",
    "theorem1_check",
    "verify_many",
    "ConstantsTable",
    "constants_report",
    "default_c_grid",
    "rect_chain",
    "Check",
    "PropertyReport",
    "property_suite",
    "ScanResult",
    "extremal_scan",
]

LOWER = 1.0 / 66.0
UPPER = 7.0 / (2.0 * math.pi)


@dataclass(frozen=True)
class Budget:
    name: str
    n_paths: int
    hsiz_rel_tol: float
    zipper_tol: float
    n_hulls: int
    n_pairs: int
    n_mc: int

    def hsiz_tol(self, hull: Hull) -> float:
        """Absolute quadtree tolerance, relative to the smallest possible area ``pi sup_im^2``."""
        return self.hsiz_rel_tol * math.pi * hull.sup_im**2


BUDGETS = {
    "quick": Budget("quick", 20_000, 2e-2, 2e-3, 20, 10, 100_000),
    "default": Budget("default", 100_000, 5e-3, 1e-3, 100, 50, 400_000),
    "thorough": Budget("thorough", 1_000_000, 1e-3, 2e-4, 200, 100, 2_000_000),
}


def get_budget(budget: Budget | str) -> Budget:
    if isinstance(budget, Budget):
        return budget
    try:
        return BUDGETS[budget]
    except KeyError:
        raise ValueError(f"unknown budget {budget!r}; choose from {sorted(BUDGETS)}") from None


# ---------------------------------------------------------------- sandwich


@dataclass
class TheoremReport:
    hull_id: str
    hcap: CapEstimate
    hsiz: AreaResult
    ratio: float
    ratio_lo: float
    ratio_hi: float
    verdict: str  # pass | inconclusive | fail
    hcap_bound: str
    hsiz_bound: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "hull_id": self.hull_id,
            "hcap": self.hcap.to_dict(),
            "hsiz": self.hsiz.to_dict(),
            "ratio": self.ratio,
            "ratio_lo": self.ratio_lo,
            "ratio_hi": self.ratio_hi,
            "pass": self.passed,
            "verdict": self.verdict,
            "hcap_bound": self.hcap_bound,
            "hsiz_bound": self.hsiz_bound,
        }

    def summary_row(self) -> tuple:
        return (self.hull_id, self.hcap.value, self.hcap.std_error, self.hsiz.value, self.hsiz.error_bound,
                self.ratio_lo, self.ratio_hi, self.passed)


SUMMARY_HEADER = ("hull_id", "hcap", "sigma_hcap", "hsiz", "err_hsiz", "ratio_lo", "ratio_hi", "pass")


def best_hcap(hull: Hull, budget: Budget, seed: int, workers: int | None = None) -> tuple[CapEstimate, str]:
    """Exact when catalogued, zipper for a lone polyline slit, WoS otherwise."""
    if has_exact(hull):
        return hcap_exact(hull), "exact"
    if len(hull.primitives) == 1 and isinstance(hull.primitives[0], Slit):
        return hcap_zipper(hull.primitives[0], budget.zipper_tol), "refinement"
    return hcap_wos(hull, budget.n_paths, seed=seed, workers=workers), "3sigma+bias"


def verdict(lo: float, hi: float) -> str:
    if lo > LOWER and hi <= UPPER:
        return "pass"
    if hi <= LOWER or lo > UPPER:
        return "fail"
    return "inconclusive"


def theorem1_check(hull: Hull, budget: Budget | str = "default", seed: int = 0, hull_id: str = "hull",
                   workers: int | None = None) -> TheoremReport:
    """Bracket ``hcap / hsiz`` and compare the bracket with the two constants."""
    b = get_budget(budget)
    cap, cap_kind = best_hcap(hull, b, seed, workers)
    area = hsiz_quadtree(hull, b.hsiz_tol(hull))
    c_lo, c_hi = cap.interval(3.0)
    a_lo, a_hi = area.interval()
    c_lo = max(c_lo, 0.0)
    r_lo = c_lo / a_hi
    r_hi = c_hi / a_lo if a_lo > 0 else math.inf
    return TheoremReport(hull_id, cap, area, cap.value / area.value, r_lo, r_hi, verdict(r_lo, r_hi),
                         cap_kind, "rigorous")


def verify_many(items: list[tuple[str, Hull]], budget: Budget | str = "default", seed: int = 0,
                workers: int | None = None) -> list[TheoremReport]:
    """Sandwich check over many hulls; item ``k`` uses seed ``seed + k`` whatever the schedule."""
    b = get_budget(budget)
    workers = workers or _walk.default_workers()

    def one(k):
        hid, h = items[k]
        return theorem1_check(h, b, seed + k, hid, workers=1 if workers > 1 else None)

    if workers <= 1:
        return [one(k) for k in range(len(items))]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(one, range(len(items))))


# -------------------------------------------------------------- constants


@dataclass
class ConstantsTable:
    rows: list  # (c, rho, rho^2 / (pi + 8c))
    argmax_c: float
    argmax_bound: float
    bound_8_5: str  # high-precision value at c = 8/5
    exceeds_1_66: bool

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "argmax_c": self.argmax_c, "argmax_bound": self.argmax_bound,
                "bound_8_5": self.bound_8_5, "exceeds_1_66": self.exceeds_1_66}


def constants_report(c_grid) -> ConstantsTable:
    """Rows ``(c, rho_c, rho_c^2/(pi + 8c))`` plus the high-precision check at ``c = 8/5``."""
    import mpmath

    grid = [float(c) for c in c_grid]
    if not grid:
        raise ValueError("empty c grid")
    rows = []
    for c in grid:
        k = bound_constants(c)
        rows.append((c, k.rho, k.rho**2 / (math.pi + 8 * c)))
    best = max(rows, key=lambda r: r[2])
    _, bound = bound_constants_mp("8/5", dps=50)
    with mpmath.workdps(50):
        ok = bool(bound > mpmath.mpf(1) / 66)
    return ConstantsTable(rows, best[0], best[2], mpmath.nstr(bound, 30), ok)


def default_c_grid(n: int = 200, c_max: float = 5.0) -> list[float]:
    return [c_max * (k + 1) / n for k in range(n)]


@dataclass
class ChainReport:
    hcap_r1: CapEstimate
    hcap_r2: CapEstimate
    r1_below_2: bool
    r2_below_7_2: bool
    r2_above_1: bool

    @property
    def passed(self) -> bool:
        return self.r1_below_2 and self.r2_below_7_2 and self.r2_above_1

    def to_dict(self) -> dict:
        return {"hcap_r1": self.hcap_r1.to_dict(), "hcap_r2": self.hcap_r2.to_dict(), "r1_below_2": self.r1_below_2,
                "r2_below_7_2": self.r2_below_7_2, "r2_above_1": self.r2_above_1, "pass": self.passed}


def rect_chain(n_paths: int = 1_000_000, seed: int = 0, workers: int | None = None) -> ChainReport:
    """WoS check of ``hcap R(i,1) < 2``, ``hcap R(i,2) < 7/2`` and ``hcap R(i,2) > 1``.

    ``R(i,1) = (-1,1) x (0,1]`` and ``R(i,2) = (-2,2) x (0,1]``; the last bound
    holds because ``R(i,2)`` contains the unit half-disk. Upper sides use
    ``value + 3 sigma + bias``, the lower side ``value - 3 sigma - bias``.
    """
    r1 = hcap_wos(Hull.of(Rect(-1, 1, 1)), n_paths, seed=seed, workers=workers)
    r2 = hcap_wos(Hull.of(Rect(-2, 2, 1)), n_paths, seed=seed, workers=workers)
    return ChainReport(r1, r2, r1.interval()[1] < 2.0, r2.interval()[1] < 3.5, r2.interval()[0] > 1.0)


# --------------------------------------------------------------- property


@dataclass
class Check:
    name: str
    n_cases: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "n_cases": self.n_cases, "pass": self.passed, "failures": self.failures}


@dataclass
class PropertyReport:
    seed: int
    budget: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "budget": self.budget, "pass": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


def _tol(*ests: CapEstimate) -> float:
    """Combined ``3 sigma + bias`` of a sum or difference of independent estimates."""
    return 3.0 * math.sqrt(sum(e.std_error**2 for e in ests)) + sum(e.bias_bound for e in ests)


def _rect_intersection(a: Rect, b: Rect) -> Hull | None:
    lo, hi = max(a.x_lo, b.x_lo), min(a.x_hi, b.x_hi)
    return Hull.of(Rect(lo, hi, min(a.h, b.h))) if lo < hi else None


def check_lower_bound(corpus, b: Budget, seed: int, workers=None) -> Check:
    chk = Check("lower_bound", len(corpus))
    for k, (hid, h) in enumerate(corpus):
        e = hcap_wos(h, b.n_paths, seed=seed + k, workers=workers)
        if e.interval()[1] < 0.5 * h.sup_im**2:
            chk.failures.append({"hull_id": hid, "hull": h.to_dict(), "hcap": e.to_dict()})
    return chk


def check_slit_saturation(b: Budget, seed: int, workers=None) -> Check:
    chk = Check("slit_saturation", 0)
    for k, (x0, hgt) in enumerate([(0.0, 1.0), (2.5, 0.3), (-1.0, 1.7)]):
        e = hcap_wos(Hull.of(VSlit(x0, hgt)), b.n_paths, seed=seed + k, workers=workers)
        chk.n_cases += 1
        if abs(e.value - 0.5 * hgt * hgt) > _tol(e):
            chk.failures.append({"slit": [x0, hgt], "hcap": e.to_dict()})
    for k, h in enumerate([Hull.of(Rect(-1, 1, 1)), Hull.of(HalfDisk(0, 1))]):
        e = hcap_wos(h, b.n_paths, seed=seed + 10 + k, workers=workers)
        chk.n_cases += 1
        if not e.interval()[0] > 0.5 * h.sup_im**2:
            chk.failures.append({"hull": h.to_dict(), "hcap": e.to_dict(), "why": "expected strict inequality"})
    return chk


def check_capacity_inequality(b: Budget, seed: int, workers=None) -> Check:
    """``hcap(A1 u A2) - hcap(A2) <= hcap(A1) - hcap(A1 n A2)`` on random rect pairs."""
    rng = np.random.Generator(np.random.PCG64(seed))
    chk = Check("capacity_inequality", b.n_pairs)
    for k in range(b.n_pairs):
        a1, a2 = random_rect(rng), random_rect(rng)
        s = seed + 1000 * k
        u = hcap_wos(Hull.of(a1, a2), b.n_paths, seed=s, workers=workers)
        e1 = hcap_wos(Hull.of(a1), b.n_paths, seed=s + 1, workers=workers)
        e2 = hcap_wos(Hull.of(a2), b.n_paths, seed=s + 2, workers=workers)
        inter = _rect_intersection(a1, a2)
        parts = [u, e1, e2]
        cap_i = 0.0
        if inter is not None:
            ei = hcap_wos(inter, b.n_paths, seed=s + 3, workers=workers)
            parts.append(ei)
            cap_i = ei.value
        gap = (u.value - e2.value) - (e1.value - cap_i)
        if gap > _tol(*parts):
            chk.failures.append({"a1": a1.to_dict(), "a2": a2.to_dict(), "gap": gap, "tol": _tol(*parts)})
    return chk


def check_nested(b: Budget, seed: int, workers=None) -> Check:
    """For ``A1`` inside ``A2`` both sides of the capacity inequality vanish."""
    chk = Check("nested_pair", 1)
    a1, a2 = Rect(-0.5, 0.5, 0.5), Rect(-1, 1, 1)
    u = hcap_wos(Hull.of(a1, a2), b.n_paths, seed=seed, workers=workers)
    e2 = hcap_wos(Hull.of(a2), b.n_paths, seed=seed, workers=workers)
    e1 = hcap_wos(Hull.of(a1), b.n_paths, seed=seed + 1, workers=workers)
    i = hcap_wos(Hull.of(a1), b.n_paths, seed=seed + 1, workers=workers)
    lhs, rhs = u.value - e2.value, e1.value - i.value
    if not (lhs == 0.0 and rhs == 0.0):
        chk.failures.append({"lhs": lhs, "rhs": rhs})
    return chk


def check_far_slits(b: Budget, seed: int, workers=None, d: float = 100.0) -> Check:
    """Slits ``d`` apart are nearly additive; the deficit is about ``2 hcap1 hcap2 / d^2``."""
    chk = Check("far_slits", 1)
    h1, h2 = 1.0, 0.5
    pair = Hull.of(VSlit(0.0, h1), VSlit(d, h2))
    u = hcap_integral(pair, 4 * b.n_paths, seed=seed, workers=workers)
    c1, c2 = 0.5 * h1 * h1, 0.5 * h2 * h2
    allowance = 4.0 * c1 * c2 / d**2
    if abs(u.value - (c1 + c2)) > _tol(u) + allowance or u.value - c2 > c1 + _tol(u):
        chk.failures.append({"union": u.to_dict(), "sum": c1 + c2})
    return chk


def check_scaling(corpus, b: Budget, seed: int, workers=None) -> Check:
    chk = Check("scaling", 0)
    for k, (hid, h) in enumerate(corpus):
        base = hcap_wos(h, b.n_paths, seed=seed + k, workers=workers)
        for r in (0.5, 2.0):
            e = hcap_wos(h.scale(r), b.n_paths, seed=seed + k + 7919, workers=workers)
            chk.n_cases += 1
            diff = e.value - r * r * base.value
            tol = 3.0 * math.hypot(e.std_error, r * r * base.std_error) + e.bias_bound + r * r * base.bias_bound
            if abs(diff) > tol:
                chk.failures.append({"hull_id": hid, "r": r, "diff": diff, "tol": tol})
    return chk


def check_translation(corpus, b: Budget, seed: int, workers=None) -> Check:
    chk = Check("translation", len(corpus))
    for k, (hid, h) in enumerate(corpus):
        e0 = hcap_wos(h, b.n_paths, seed=seed + k, workers=workers)
        e1 = hcap_wos(h.translate(3.0), b.n_paths, seed=seed + k + 104729, workers=workers)
        if abs(e1.value - e0.value) > _tol(e0, e1):
            chk.failures.append({"hull_id": hid, "diff": e1.value - e0.value, "tol": _tol(e0, e1)})
    return chk


def check_hsiz(corpus, b: Budget, seed: int) -> list[Check]:
    top = Check("hsiz_top_disk", len(corpus))
    agree = Check("hsiz_quadtree_vs_mc", len(corpus))
    for k, (hid, h) in enumerate(corpus):
        q = hsiz_quadtree(h, b.hsiz_tol(h))
        if q.value + q.error_bound < math.pi * h.sup_im**2:
            top.failures.append({"hull_id": hid, "hsiz": q.to_dict()})
        m = hsiz_mc(h, b.n_mc, seed=seed + k)
        if abs(q.value - m.value) > q.error_bound + m.error_bound:
            agree.failures.append({"hull_id": hid, "quadtree": q.to_dict(), "mc": m.to_dict()})
    mono = Check("hsiz_monotone", 0)
    prev = None
    for a in (0.25, 0.5, 1.0, 2.0):
        h = Hull.of(Rect(-a, a, min(1.0, 0.5 + a / 4)))
        q = hsiz_quadtree(h, b.hsiz_tol(h))
        mono.n_cases += 1
        if prev is not None and q.value + q.error_bound < prev.value - prev.error_bound:
            mono.failures.append({"a": a, "hsiz": q.to_dict(), "previous": prev.to_dict()})
        prev = q
    return [top, agree, mono]


def check_covers(corpus, b: Budget, seed: int, workers=None) -> list[Check]:
    cov = Check("cover_structure", 0)
    sand = Check("cover_hsiz_sandwich", len(corpus))
    caps = Check("cover_hcap_sandwich", len(corpus))
    for k, (hid, h) in enumerate(corpus):
        covers = {}
        for c in (1.0, 1.6):
            cv = greedy_cover(h, c)
            covers[c] = cv
            rep = coverage_check(h, cv, 20_000, seed + k)
            cov.n_cases += 1
            if not rep.passed:
                cov.failures.append({"hull_id": hid, "c": c, "disjoint": rep.disjoint, "monotone": rep.monotone,
                                     "violations": rep.violations[:5]})
        q = hsiz_quadtree(h, b.hsiz_tol(h))
        s1 = cover_sums(covers[1.0])
        if not (s1.hsiz_lo <= q.value + q.error_bound and q.value - q.error_bound <= s1.hsiz_hi):
            sand.failures.append({"hull_id": hid, "sums": s1.to_dict(), "hsiz": q.to_dict()})
        e = hcap_wos(h, b.n_paths, seed=seed + k, workers=workers)
        lo = cover_sums(covers[1.6]).hcap_lo
        w = 3.0 * e.std_error + e.bias_bound
        if not (lo - w <= e.value <= s1.hcap_hi + w):
            caps.failures.append({"hull_id": hid, "hcap": e.to_dict(), "hcap_lo": lo, "hcap_hi": s1.hcap_hi})
    return [cov, sand, caps]


def property_suite(seed: int = 0, budget: Budget | str = "default", workers: int | None = None) -> PropertyReport:
    """Run every cross-module invariant on a seeded random corpus; failures keep their inputs."""
    b = get_budget(budget)
    corpus = random_corpus(b.n_hulls, seed)
    small = corpus[: max(5, b.n_hulls // 10)]
    checks = [
        check_lower_bound(corpus, b, seed, workers),
        check_slit_saturation(b, seed, workers),
        check_capacity_inequality(b, seed, workers),
        check_nested(b, seed, workers),
        check_far_slits(b, seed, workers),
        check_scaling(small, b, seed, workers),
        check_translation(small, b, seed, workers),
        *check_hsiz(small, b, seed),
        *check_covers(corpus, b, seed, workers),
    ]
    return PropertyReport(seed, b.name, checks)


# ------------------------------------------------------------------- scan


FAMILIES = ("rect", "halfdisk", "vslit", "comb")


def family_members(family: str) -> list[tuple[str, Hull]]:
    if family == "rect":
        return [(f"a={a:g}", Hull.of(Rect(-a, a, 1.0))) for a in (0.05, 0.1, 0.25, 0.5, 1, 2, 4, 8)]
    if family == "halfdisk":
        return [("r=1", Hull.of(HalfDisk(0.0, 1.0)))]
    if family == "vslit":
        return [(f"h={h:g}", Hull.of(VSlit(0.0, h))) for h in (0.25, 1.0, 4.0)]
    if family == "comb":
        return [
            (f"k={k},s={s:g}", Hull(VSlit(j * s, 1.0) for j in range(k)))
            for k in (2, 4, 8)
            for s in (0.25, 0.5, 1.0, 2.0)
        ]
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


@dataclass
class ScanResult:
    family: str
    reports: list
    min_ratio: float
    max_ratio: float
    argmin: str
    argmax: str

    @property
    def in_sandwich(self) -> bool:
        return all(r.verdict != "fail" for r in self.reports)

    def to_dict(self) -> dict:
        return {"family": self.family, "min_ratio": self.min_ratio, "max_ratio": self.max_ratio,
                "argmin": self.argmin, "argmax": self.argmax, "in_sandwich": self.in_sandwich,
                "reports": [r.to_dict() for r in self.reports]}


def extremal_scan(family: str, budget: Budget | str = "default", seed: int = 0,
                  workers: int | None = None) -> ScanResult:
    """Ratio ``hcap/hsiz`` across a parameterised family, with the empirical extremes."""
    members = family_members(family)
    reps = verify_many(members, budget, seed, workers)
    lo = min(reps, key=lambda r: r.ratio)
    hi = max(reps, key=lambda r: r.ratio)
    return ScanResult(family, reps, lo.ratio, hi.ratio, lo.hull_id, hi.hull_id)
