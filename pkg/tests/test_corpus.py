import math

import numpy as np

from hcaplab.corpus import FOOT_RANGE, H_RANGE, random_corpus, random_hull
from hcaplab.hull import HalfDisk, Rect, Slit, VSlit


def test_reproducible_by_seed():
    assert random_corpus(10, 4) == random_corpus(10, 4)
    assert random_corpus(10, 4) != random_corpus(10, 5)


def test_prefix_stable():
    assert random_corpus(5, 2) == random_corpus(12, 2)[:5]


def test_generator_ranges():
    for _, h in random_corpus(200, 1):
        assert 1 <= len(h.primitives) <= 5
        for p in h.primitives:
            if isinstance(p, (Rect, VSlit)):
                assert H_RANGE[0] <= p.h <= H_RANGE[1]
            elif isinstance(p, HalfDisk):
                assert H_RANGE[0] <= p.r <= H_RANGE[1]
                assert FOOT_RANGE[0] <= p.x0 <= FOOT_RANGE[1]
            else:
                assert FOOT_RANGE[0] <= p.foot <= FOOT_RANGE[1]
                ys = [y for _, y in p.vertices]
                assert ys == sorted(ys)


def test_slits_keep_to_themselves():
    for _, h in random_corpus(200, 3):
        prims = h.primitives
        for i, p in enumerate(prims):
            if isinstance(p, Slit):
                for j, q in enumerate(prims):
                    if i != j:
                        a, b = p.extent, q.extent
                        assert a[1] < b[0] or b[1] < a[0]


def test_all_kinds_occur():
    kinds = {type(p) for _, h in random_corpus(100, 0) for p in h.primitives}
    assert kinds == {Rect, HalfDisk, VSlit, Slit}


def test_heights_log_uniform():
    rng = np.random.Generator(np.random.PCG64(9))
    hs = np.array([p.sup_im for _ in range(400) for p in random_hull(rng).primitives])
    logs = np.log(hs)
    mid = 0.5 * (math.log(H_RANGE[0]) + math.log(H_RANGE[1]))
    assert abs(np.mean(logs) - mid) < 0.15
