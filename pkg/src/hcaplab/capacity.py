"""Half-plane capacity: exact catalog, walk-on-spheres estimators, strip constants.

Estimators follow two Brownian characterisations of ``hcap(A)``:

* the limit ``y E^{iy}[Im B_tau]`` as ``y -> infinity`` (:func:`hcap_wos`), and
* ``(1/pi) * integral of E^{x+iy}[Im B_tau] dx`` for ``y >= Im[A]`` (:func:`hcap_integral`).

Paths stop within ``eps`` of the hull (recording the current height) or
within ``eps`` of the real axis (recording 0, the boundary value there).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _walk
from .hull import HalfDisk, Hull, VSlit

__all__ = [
    "CapEstimate",
    "ProbEstimate",
    "BoundConstants",
    "ConvergenceError",
    "NoExactFormula",
    "MAX_ABORT_FRACTION",
    "hcap_exact",
    "hcap_wos",
    "hcap_integral",
    "strip_exit_prob",
    "strip_exit_prob_mc",
    "bound_constants",
]

MAX_ABORT_FRACTION = 1e-3
DEFAULT_MAX_STEPS = 10**6
METHODS = ("exact", "wos_limit", "wos_integral", "zipper")


class ConvergenceError(RuntimeError):
    """Too many walks hit the step cap."""


class NoExactFormula(ValueError):
    pass


@dataclass(frozen=True)
class CapEstimate:
    value: float
    std_error: float
    bias_bound: float
    n_paths: int
    seed: int
    method: str
    abort_fraction: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.std_error < 0 or self.bias_bound < 0:
            raise ValueError("std_error and bias_bound must be non-negative")

    def interval(self, k: float = 3.0) -> tuple[float, float]:
        """``value -+ (k sigma + bias)``."""
        w = k * self.std_error + self.bias_bound
        return self.value - w, self.value + w

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ProbEstimate:
    value: float
    std_error: float
    n_paths: int
    seed: int
    abort_fraction: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BoundConstants:
    c: float
    theta: float
    rho: float
    exit_prob: float

    def to_dict(self) -> dict:
        return asdict(self)


# ----------------------------------------------------------------- exact


def hcap_exact(hull: Hull) -> CapEstimate:
    """Closed-form capacity of a single vertical slit (``h^2/2``) or half-disk (``r^2``)."""
    if len(hull.primitives) == 1:
        p = hull.primitives[0]
        if isinstance(p, VSlit):
            return CapEstimate(0.5 * p.h * p.h, 0.0, 0.0, 0, 0, "exact")
        if isinstance(p, HalfDisk):
            return CapEstimate(p.r * p.r, 0.0, 0.0, 0, 0, "exact")
    raise NoExactFormula("no exact formula for this hull (catalog: single VSlit or HalfDisk)")


def has_exact(hull: Hull) -> bool:
    return len(hull.primitives) == 1 and isinstance(hull.primitives[0], (VSlit, HalfDisk))


# ------------------------------------------------------------ walk-on-spheres


def _check_batch(batch):
    if batch.abort_fraction > MAX_ABORT_FRACTION:
        raise ConvergenceError(
            f"{batch.abort_fraction:.4%} of walks exceeded the step cap (limit {MAX_ABORT_FRACTION:.1%})"
        )


def _mean_se(v: np.ndarray) -> tuple[float, float]:
    n = v.size
    mean = float(np.sum(v)) / n
    sd = float(np.std(v, ddof=1)) if n > 1 else 0.0
    return mean, sd / math.sqrt(n)


def hcap_wos(
    hull: Hull,
    n_paths: int = 100_000,
    y_start: float | None = None,
    eps: float | None = None,
    seed: int = 0,
    *,
    workers: int | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    backend: str | None = None,
) -> CapEstimate:
    """Estimate ``hcap`` as ``y_start * E[Im B_tau]`` from a far starting point.

    Paths start above the middle of the hull's horizontal extent. The first
    move is an exact Cauchy jump onto the line ``Im z = b`` just above the
    hull, followed by walk-on-spheres steps of radius ``min(y, dist)``.

    Parameters
    ----------
    y_start : float, optional
        Starting height, at least ``4 * sup_im``; defaults to ``32 * R`` with
        ``R`` the enclosing half-disk radius defined below.
    eps : float, optional
        Stopping distance; defaults to ``1e-4 * sup_im``.

    Notes
    -----
    ``bias_bound`` adds the stopping bias ``eps * y_start`` and a truncation
    term ``R^4 / y_start^2``, where ``R`` is the radius of the smallest
    half-disk about the start abscissa enclosing the hull (``R^2`` bounds
    ``hcap`` and ``R^2 / y^2`` is the size of the next term of the expansion
    at infinity). The truncation term is a model bound, checked against
    exact values in the test suite.
    """
    s = hull.sup_im
    x_c = hull.center_x
    R = hull.radius_about(x_c)
    y_start = 32.0 * R if y_start is None else float(y_start)
    eps = 1e-4 * s if eps is None else float(eps)
    if not y_start >= 4.0 * s:
        raise ValueError(f"y_start={y_start} must be at least 4*sup_im={4 * s}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    b = s * (1 + 1e-6)
    batch = _walk.run_limit(hull.packed(), seed, n_paths, x_c, y_start, b, eps, max_steps,
                            workers=workers, backend=backend)
    _check_batch(batch)
    mean, se = _mean_se(batch.value)
    bias = eps * y_start * (1 - batch.abort_fraction) + R**4 / y_start**2
    return CapEstimate(y_start * mean, y_start * se, bias, n_paths, seed, "wos_limit", batch.abort_fraction)


def _tail_fraction(x_c: float, lo: float, hi: float, y0: float) -> float:
    """Share of the dipole profile ``y0 / ((x - x_c)^2 + y0^2) / pi`` outside ``[lo, hi]``."""
    return (math.atan2(y0, hi - x_c) + math.atan2(y0, x_c - lo)) / math.pi


def hcap_integral(
    hull: Hull,
    n_paths: int = 100_000,
    y0: float | None = None,
    window: tuple[float, float] | None = None,
    eps: float | None = None,
    seed: int = 0,
    *,
    workers: int | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    backend: str | None = None,
) -> CapEstimate:
    """Estimate ``(1/pi) * integral E^{x+i y0}[Im B_tau] dx`` by uniform start points.

    Far from the hull the integrand behaves like ``hcap * y0 / (x^2 + y0^2)``;
    the mass of that profile outside the window is added back by
    dividing by ``1 - tail``. ``bias_bound`` carries the stopping bias and the
    model error of that correction.
    """
    s = hull.sup_im
    y0 = 1.01 * s if y0 is None else float(y0)
    eps = 1e-4 * s if eps is None else float(eps)
    x_min, x_max = hull.extent
    if window is None:
        window = (x_min - 50.0 * y0, x_max + 50.0 * y0)
    lo, hi = map(float, window)
    if not y0 >= s:
        raise ValueError(f"y0={y0} must be at least sup_im={s}")
    if not (lo <= x_min - 20.0 * y0 and hi >= x_max + 20.0 * y0):
        raise ValueError("window must cover the hull's extent plus a margin of 20*y0 on each side")
    if not eps > 0:
        raise ValueError("eps must be positive")
    batch = _walk.run_line(hull.packed(), seed, n_paths, lo, hi, y0, eps, max_steps,
                           workers=workers, backend=backend)
    _check_batch(batch)
    mean, se = _mean_se(batch.value)
    length = hi - lo
    x_c = hull.center_x
    tail = _tail_fraction(x_c, lo, hi, y0)
    raw = length / math.pi * mean
    value = raw / (1 - tail)
    R = hull.radius_about(x_c)
    margin = min(hi - x_c, x_c - lo)
    tail_err = (value - raw) * 2.0 * (R + y0) / margin
    bias = length / math.pi * eps / (1 - tail) + tail_err
    return CapEstimate(value, length / math.pi * se / (1 - tail), bias, n_paths, seed, "wos_integral",
                       batch.abort_fraction)


# ------------------------------------------------------------ strip constants


def strip_exit_prob(c: float) -> float:
    """Probability that Brownian motion from ``i`` leaves ``(-2c, 2c) x (0, inf)`` through its base.

    ``sin(pi z / (4c))`` maps the strip onto the half-plane, the base onto
    ``[-1, 1]`` and ``i`` onto ``i sinh(theta)``; the Poisson kernel then gives
    ``(2/pi) arctan(1/sinh theta) = (4/pi) arctan(exp(-theta))``.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    return 4.0 / math.pi * math.atan(math.exp(-math.pi / (4.0 * c)))


def strip_exit_prob_mc(c: float, n_paths: int = 100_000, eps: float = 1e-6, seed: int = 0, *,
                       workers: int | None = None, max_steps: int = DEFAULT_MAX_STEPS,
                       backend: str | None = None) -> ProbEstimate:
    if not c > 0:
        raise ValueError("c must be positive")
    batch = _walk.run_strip(2.0 * c, 0.0, 1.0, seed, n_paths, eps, max_steps, workers=workers, backend=backend)
    _check_batch(batch)
    base = (batch.status == 0).astype(float)
    p, se = _mean_se(base)
    return ProbEstimate(p, se, n_paths, seed, batch.abort_fraction)


def bound_constants(c: float) -> BoundConstants:
    """``theta = pi/(4c)``, ``rho = (2 sqrt 2 / pi) arctan(e^-theta)`` and the base exit probability."""
    if not c > 0:
        raise ValueError("c must be positive")
    theta = math.pi / (4.0 * c)
    at = math.atan(math.exp(-theta))
    return BoundConstants(c, theta, 2.0 * math.sqrt(2.0) / math.pi * at, 4.0 / math.pi * at)


def bound_constants_mp(c, dps: int = 50):
    """High-precision ``(rho, rho^2 / (pi + 8c))`` with mpmath; ``c`` may be a string like ``"8/5"``."""
    import mpmath

    with mpmath.workdps(dps):
        cm = mpmath.mpf(mpmath.fraction(*map(int, c.split("/")))) if isinstance(c, str) and "/" in c else mpmath.mpf(c)
        theta = mpmath.pi / (4 * cm)
        rho = 2 * mpmath.sqrt(2) / mpmath.pi * mpmath.atan(mpmath.exp(-theta))
        return +rho, +(rho**2 / (mpmath.pi + 8 * cm))
