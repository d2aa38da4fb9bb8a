"""Pure numpy walk-on-spheres kernels (fallback for ``_walk_ext``).

Same signatures and same per-path draw sequence as the compiled kernels;
all live paths of a chunk advance together, one sphere per iteration.
"""
from __future__ import annotations

import numpy as np

from .rng import path_keys, uniforms

REAL, HULL, ABORT = 0, 1, 2


def hull_dist(x, y, rects, disks, segs):
    best = np.full(x.shape, 1e300)
    for xl, xh, h in rects:
        dx = np.maximum(np.maximum(xl - x, x - xh), 0.0)
        dy = np.maximum(np.maximum(-y, y - h), 0.0)
        np.minimum(best, np.hypot(dx, dy), out=best)
    for x0, r in disks:
        np.minimum(best, np.maximum(np.hypot(x - x0, y) - r, 0.0), out=best)
    for x1, y1, x2, y2 in segs:
        vx, vy = x2 - x1, y2 - y1
        ll = vx * vx + vy * vy
        if ll > 0.0:
            t = np.clip(((x - x1) * vx + (y - y1) * vy) / ll, 0.0, 1.0)
        else:
            t = 0.0
        np.minimum(best, np.hypot(x - (x1 + t * vx), y - (y1 + t * vy)), out=best)
    return best


def _walk(x, y, pkeys, rects, disks, segs, eps, max_steps, out_value, out_status, out_steps):
    idx = np.arange(x.size)
    x = x.copy()
    y = y.copy()
    k = 1
    steps = 0
    while idx.size:
        d = hull_dist(x, y, rects, disks, segs)
        hit = d < eps
        real = ~hit & (y < eps)
        stop = hit | real
        if steps >= max_steps:
            abort = ~stop
        else:
            abort = np.zeros_like(stop)
        done = stop | abort
        if done.any():
            di = idx[done]
            out_value[di] = np.where(hit[done], y[done], 0.0)
            out_status[di] = np.where(hit[done], HULL, np.where(real[done], REAL, ABORT))
            out_steps[di] = steps
            keep = ~done
            idx, x, y, d, pkeys = idx[keep], x[keep], y[keep], d[keep], pkeys[keep]
            if not idx.size:
                break
        r = np.where(d < y, d, y)
        th = 2.0 * np.pi * uniforms(pkeys, k)
        k += 1
        x += r * np.cos(th)
        y += r * np.sin(th)
        steps += 1


def limit_paths(rects, disks, segs, key, first, x_start, y_start, b, eps, max_steps,
                out_value, out_status, out_steps):
    n = out_value.shape[0]
    pkeys = path_keys(key, np.arange(first, first + n, dtype=np.uint64))
    gamma = y_start - b
    if gamma > 0.0:
        x = x_start + gamma * np.tan(np.pi * (uniforms(pkeys, 0) - 0.5))
        y = np.full(n, b)
    else:
        x = np.full(n, x_start)
        y = np.full(n, y_start)
    _walk(x, y, pkeys, rects, disks, segs, eps, max_steps, out_value, out_status, out_steps)


def line_paths(rects, disks, segs, key, first, x_lo, x_hi, y0, eps, max_steps,
               out_value, out_status, out_steps):
    n = out_value.shape[0]
    pkeys = path_keys(key, np.arange(first, first + n, dtype=np.uint64))
    x = x_lo + (x_hi - x_lo) * uniforms(pkeys, 0)
    y = np.full(n, float(y0))
    _walk(x, y, pkeys, rects, disks, segs, eps, max_steps, out_value, out_status, out_steps)


def strip_paths(half_width, x0, y0, key, first, eps, max_steps, out_status, out_steps):
    n = out_status.shape[0]
    idx = np.arange(n)
    pkeys = path_keys(key, np.arange(first, first + n, dtype=np.uint64))
    x = np.full(n, float(x0))
    y = np.full(n, float(y0))
    k = 1
    steps = 0
    while idx.size:
        ds = half_width - np.abs(x)
        stop = (y < eps) | (ds < eps)
        abort = ~stop if steps >= max_steps else np.zeros_like(stop)
        done = stop | abort
        if done.any():
            di = idx[done]
            out_status[di] = np.where(abort[done], ABORT, np.where(y[done] <= ds[done], REAL, HULL))
            out_steps[di] = steps
            keep = ~done
            idx, x, y, ds, pkeys = idx[keep], x[keep], y[keep], ds[keep], pkeys[keep]
            if not idx.size:
                break
        r = np.where(ds < y, ds, y)
        th = 2.0 * np.pi * uniforms(pkeys, k)
        k += 1
        x += r * np.cos(th)
        y += r * np.sin(th)
        steps += 1
