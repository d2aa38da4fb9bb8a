"""Kernel selection and chunked, schedule-independent execution.

The compiled extension is used when it imports; set ``HCAPLAB_BACKEND=python``
to force the numpy fallback. Paths are split into fixed-size chunks that
write into preallocated per-path arrays, so the result does not depend on
how many workers ran or in which order chunks finished.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _walk_py
from .rng import seed_key

try:
    from . import _walk_ext
except ImportError:  # pragma: no cover - depends on the build
    _walk_ext = None

CHUNK = 1 << 15

__all__ = ["BACKEND", "available_backends", "get_kernels", "default_workers", "WalkBatch",
           "run_limit", "run_line", "run_strip"]


def available_backends() -> list[str]:
    return (["cython"] if _walk_ext is not None else []) + ["python"]


def _select() -> str:
    forced = os.environ.get("HCAPLAB_BACKEND", "").strip().lower()
    if forced in ("python", "numpy"):
        return "python"
    if forced == "cython" and _walk_ext is None:
        raise ImportError("HCAPLAB_BACKEND=cython but hcaplab._walk_ext is not built")
    return "cython" if _walk_ext is not None else "python"


BACKEND = _select()


def get_kernels(backend: str | None = None):
    backend = backend or BACKEND
    if backend == "cython":
        if _walk_ext is None:
            raise ImportError("compiled kernels are not available")
        return _walk_ext
    if backend == "python":
        return _walk_py
    raise ValueError(f"unknown backend {backend!r}")


def default_workers() -> int:
    env = os.environ.get("HCAPLAB_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class WalkBatch:
    """Per-path outcome arrays of one estimator run."""

    value: np.ndarray
    status: np.ndarray
    steps: np.ndarray

    @property
    def n(self) -> int:
        return self.value.size

    @property
    def abort_fraction(self) -> float:
        return float(np.count_nonzero(self.status == _walk_py.ABORT)) / max(self.n, 1)

    @property
    def hull_fraction(self) -> float:
        return float(np.count_nonzero(self.status == _walk_py.HULL)) / max(self.n, 1)


def _run(n, workers, backend, job):
    value = np.zeros(n)
    status = np.zeros(n, dtype=np.int8)
    steps = np.zeros(n, dtype=np.int32)
    starts = range(0, n, CHUNK)
    kern = get_kernels(backend)

    def one(s):
        e = min(s + CHUNK, n)
        job(kern, s, value[s:e], status[s:e], steps[s:e])

    workers = workers or default_workers()
    if workers <= 1 or n <= CHUNK:
        for s in starts:
            one(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(one, starts))
    return WalkBatch(value, status, steps)


def run_limit(geom, seed, n, x_start, y_start, b, eps, max_steps, workers=None, backend=None) -> WalkBatch:
    rects, disks, segs = geom
    key = seed_key(seed)

    def job(kern, s, v, st, sp):
        kern.limit_paths(rects, disks, segs, key, s, float(x_start), float(y_start), float(b),
                         float(eps), int(max_steps), v, st, sp)

    return _run(n, workers, backend, job)


def run_line(geom, seed, n, x_lo, x_hi, y0, eps, max_steps, workers=None, backend=None) -> WalkBatch:
    rects, disks, segs = geom
    key = seed_key(seed)

    def job(kern, s, v, st, sp):
        kern.line_paths(rects, disks, segs, key, s, float(x_lo), float(x_hi), float(y0),
                        float(eps), int(max_steps), v, st, sp)

    return _run(n, workers, backend, job)


def run_strip(half_width, x0, y0, seed, n, eps, max_steps, workers=None, backend=None) -> WalkBatch:
    key = seed_key(seed)

    def job(kern, s, v, st, sp):
        kern.strip_paths(float(half_width), float(x0), float(y0), key, s, float(eps), int(max_steps), st, sp)

    return _run(n, workers, backend, job)
