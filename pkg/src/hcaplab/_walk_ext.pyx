# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled walk-on-spheres kernels.

Mirrors ``hcaplab._walk_py`` statement for statement; the Python side
chooses between them at import time.
"""
from libc.math cimport sqrt, cos, sin, tan, hypot, fabs, M_PI
from libc.stdint cimport uint64_t, int64_t, int32_t, int8_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t PATH_MULT = 0xD1B54A32D192ED03ULL
cdef double TWO_M53 = 1.1102230246251565e-16

DEF REAL = 0
DEF HULL = 1
DEF ABORT = 2


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t path_key(uint64_t key, uint64_t path) noexcept nogil:
    return mix64(key + (path + 1) * PATH_MULT)


cdef inline double uniform(uint64_t pkey, uint64_t k) noexcept nogil:
    return (<double>(mix64(pkey + (k + 1) * GOLDEN) >> 11) + 0.5) * TWO_M53


cdef inline double clamp_gap(double t, double lo, double hi) noexcept nogil:
    if t < lo:
        return lo - t
    if t > hi:
        return t - hi
    return 0.0


cdef double hull_dist(double x, double y,
                      const double[:, ::1] rects,
                      const double[:, ::1] disks,
                      const double[:, ::1] segs) noexcept nogil:
    cdef double best = 1e300
    cdef double d, dx, dy, vx, vy, ll, t
    cdef Py_ssize_t i
    for i in range(rects.shape[0]):
        dx = clamp_gap(x, rects[i, 0], rects[i, 1])
        dy = clamp_gap(y, 0.0, rects[i, 2])
        d = hypot(dx, dy)
        if d < best:
            best = d
    for i in range(disks.shape[0]):
        d = hypot(x - disks[i, 0], y) - disks[i, 1]
        if d < 0.0:
            d = 0.0
        if d < best:
            best = d
    for i in range(segs.shape[0]):
        vx = segs[i, 2] - segs[i, 0]
        vy = segs[i, 3] - segs[i, 1]
        ll = vx * vx + vy * vy
        if ll > 0.0:
            t = ((x - segs[i, 0]) * vx + (y - segs[i, 1]) * vy) / ll
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        else:
            t = 0.0
        d = hypot(x - (segs[i, 0] + t * vx), y - (segs[i, 1] + t * vy))
        if d < best:
            best = d
    return best


cdef inline int walk(double x, double y, uint64_t pkey, uint64_t k,
                     const double[:, ::1] rects,
                     const double[:, ::1] disks,
                     const double[:, ::1] segs,
                     double eps, int64_t max_steps,
                     double* value, int32_t* nsteps) noexcept nogil:
    cdef double d, r, th
    cdef int64_t steps = 0
    while True:
        d = hull_dist(x, y, rects, disks, segs)
        if d < eps:
            value[0] = y
            nsteps[0] = <int32_t>steps
            return HULL
        if y < eps:
            value[0] = 0.0
            nsteps[0] = <int32_t>steps
            return REAL
        if steps >= max_steps:
            value[0] = 0.0
            nsteps[0] = <int32_t>steps
            return ABORT
        r = d if d < y else y
        th = 2.0 * M_PI * uniform(pkey, k)
        k += 1
        x += r * cos(th)
        y += r * sin(th)
        steps += 1


def limit_paths(const double[:, ::1] rects, const double[:, ::1] disks, const double[:, ::1] segs,
                uint64_t key, int64_t first, double x_start, double y_start, double b,
                double eps, int64_t max_steps,
                double[::1] out_value, int8_t[::1] out_status, int32_t[::1] out_steps):
    """Paths from ``x_start + i y_start``; exact Cauchy jump to the line ``Im = b`` first."""
    cdef Py_ssize_t i, n = out_value.shape[0]
    cdef uint64_t pkey
    cdef double x, y, gamma = y_start - b
    with nogil:
        for i in range(n):
            pkey = path_key(key, <uint64_t>(first + i))
            if gamma > 0.0:
                x = x_start + gamma * tan(M_PI * (uniform(pkey, 0) - 0.5))
                y = b
            else:
                x = x_start
                y = y_start
            out_status[i] = <int8_t>walk(x, y, pkey, 1, rects, disks, segs, eps, max_steps,
                                        &out_value[i], &out_steps[i])


def line_paths(const double[:, ::1] rects, const double[:, ::1] disks, const double[:, ::1] segs,
               uint64_t key, int64_t first, double x_lo, double x_hi, double y0,
               double eps, int64_t max_steps,
               double[::1] out_value, int8_t[::1] out_status, int32_t[::1] out_steps):
    """Paths from ``x + i y0`` with ``x`` uniform on ``[x_lo, x_hi]``."""
    cdef Py_ssize_t i, n = out_value.shape[0]
    cdef uint64_t pkey
    cdef double x
    with nogil:
        for i in range(n):
            pkey = path_key(key, <uint64_t>(first + i))
            x = x_lo + (x_hi - x_lo) * uniform(pkey, 0)
            out_status[i] = <int8_t>walk(x, y0, pkey, 1, rects, disks, segs, eps, max_steps,
                                        &out_value[i], &out_steps[i])


def strip_paths(double half_width, double x0, double y0, uint64_t key, int64_t first,
                double eps, int64_t max_steps,
                int8_t[::1] out_status, int32_t[::1] out_steps):
    """Walks in ``(-w, w) x (0, inf)``; status REAL for exits through the base."""
    cdef Py_ssize_t i, n = out_status.shape[0]
    cdef uint64_t pkey, k
    cdef double x, y, ds, r, th
    cdef int64_t steps
    with nogil:
        for i in range(n):
            pkey = path_key(key, <uint64_t>(first + i))
            x = x0
            y = y0
            k = 1
            steps = 0
            while True:
                ds = half_width - fabs(x)
                if y < eps or ds < eps:
                    out_status[i] = REAL if y <= ds else HULL
                    break
                if steps >= max_steps:
                    out_status[i] = ABORT
                    break
                r = ds if ds < y else y
                th = 2.0 * M_PI * uniform(pkey, k)
                k += 1
                x += r * cos(th)
                y += r * sin(th)
                steps += 1
            out_steps[i] = <int32_t>steps
