"""Throughput of the compiled and numpy walk kernels on the same workloads.

Run with ``python benchmarks/bench_kernels.py [--n 200000]``. Both backends
consume identical random streams, so the script also reports the largest
per-path disagreement.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hcaplab import HalfDisk, Hull, Rect, Slit, VSlit
from hcaplab._walk import available_backends, run_limit, run_strip

CASES = {
    "vslit": Hull.of(VSlit(0.0, 1.0)),
    "rect": Hull.of(Rect(-2.0, 2.0, 1.0)),
    "halfdisk": Hull.of(HalfDisk(0.0, 2**0.5)),
    "mixed": Hull.of(Rect(-3, -1.5, 0.6), HalfDisk(0.5, 0.8), VSlit(2.2, 1.2), Slit(3.5, ((3.8, 0.4), (3.6, 0.9)))),
}


def bench(n: int, seed: int) -> None:
    backends = available_backends()
    print(f"backends: {', '.join(backends)}   paths per case: {n}")
    print(f"{'case':<10}" + "".join(f"{b + ' [paths/s]':>22}" for b in backends) + f"{'speedup':>10}{'max |dv|':>12}")
    for name, hull in CASES.items():
        s = hull.sup_im
        r = hull.radius_about(hull.center_x)
        rates, values = [], []
        for b in backends:
            t = time.perf_counter()
            batch = run_limit(hull.packed(), seed, n, hull.center_x, 32 * r, s * (1 + 1e-6), 1e-4 * s, 10**6,
                              workers=1, backend=b)
            rates.append(n / (time.perf_counter() - t))
            values.append(batch.value)
        speed = rates[0] / rates[-1] if len(rates) > 1 else 1.0
        dv = float(np.max(np.abs(values[0] - values[-1])))
        print(f"{name:<10}" + "".join(f"{x:>22.0f}" for x in rates) + f"{speed:>10.1f}{dv:>12.2e}")
    rates = []
    for b in backends:
        t = time.perf_counter()
        run_strip(2.0, 0.0, 1.0, seed, n, 1e-6, 10**6, workers=1, backend=b)
        rates.append(n / (time.perf_counter() - t))
    speed = rates[0] / rates[-1] if len(rates) > 1 else 1.0
    print(f"{'strip':<10}" + "".join(f"{x:>22.0f}" for x in rates) + f"{speed:>10.1f}{'':>12}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()
    bench(a.n, a.seed)
