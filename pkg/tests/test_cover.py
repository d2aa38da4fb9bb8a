import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcaplab.capacity import bound_constants
from hcaplab.cover import (
    Cover,
    CoverElement,
    coverage_check,
    cover_sums,
    greedy_cover,
    heights_monotone,
    intervals_disjoint,
)
from hcaplab.hsiz import hsiz_quadtree
from hcaplab.hull import HalfDisk, Hull, Point, Rect, Slit, VSlit


def pts(cover):
    return [(e.x, e.y) for e in cover]


class TestGreedy:
    @pytest.mark.parametrize("c", [0.1, 1.0, 8 / 5])
    def test_single_slit(self, c):
        assert pts(greedy_cover(Hull.of(VSlit(0, 1)), c)) == [(0.0, 1.0)]

    def test_two_slits(self):
        cv = greedy_cover(Hull.of(VSlit(0, 1), VSlit(10, 0.5)), 1.0)
        assert pts(cv) == [(0.0, 1.0), (10.0, 0.5)]
        assert [e.interval() for e in cv] == [(-1.0, 1.0), (9.5, 10.5)]

    def test_rect_leftmost_tie_break(self):
        cv = greedy_cover(Hull.of(Rect(-1, 1, 1)), 1.0)
        assert pts(cv) == [(-1.0, 1.0)]
        assert cv[0].interval(2.0) == (-3.0, 1.0)

    def test_boundary_of_open_box_is_not_covered(self):
        # second slit sits exactly on the edge of R(z_1, 2c)
        cv = greedy_cover(Hull.of(VSlit(0, 1), VSlit(2, 0.5)), 1.0)
        assert pts(cv) == [(0.0, 1.0), (2.0, 0.5)]
        assert intervals_disjoint(cv)

    def test_primitive_order_breaks_exact_ties(self):
        cv = greedy_cover(Hull.of(VSlit(0, 1), Slit(0, ((0.0, 1.0),))), 1.0)
        assert len(cv) == 1

    def test_sloped_slit_needs_many_boxes(self):
        cv = greedy_cover(Hull.of(Slit(0, ((3.0, 0.5),))), 1.0)
        assert len(cv) > 3
        assert heights_monotone(cv) and intervals_disjoint(cv)

    def test_truncation_bound_covers_the_tail(self):
        h = Hull.of(Slit(0, ((3.0, 0.5),)))
        coarse = greedy_cover(h, 1.0, grid=1e-4, eps_stop=1e-2)
        fine = greedy_cover(h, 1.0, grid=1e-4, eps_stop=0.0)
        assert coarse.truncation_bound > 0 and fine.truncation_bound == 0
        tail = cover_sums(fine).sum_sq - cover_sums(coarse).sum_sq
        assert 0 < tail <= coarse.truncation_bound

    def test_scaling(self):
        h = Hull.of(Rect(-1, 0.3, 0.6), HalfDisk(2, 0.9), Slit(4, ((4.5, 0.7),)))
        a = greedy_cover(h, 1.0, grid=1 / 64, eps_stop=1e-4)
        b = greedy_cover(h.scale(2.0), 1.0, grid=2 / 64, eps_stop=2e-4)
        assert pts(b) == [(2 * x, 2 * y) for x, y in pts(a)]

    def test_validation(self):
        with pytest.raises(ValueError):
            greedy_cover(Hull.of(VSlit(0, 1)), 0.0)
        with pytest.raises(ValueError):
            greedy_cover(Hull.of(VSlit(0, 1)), 1.0, grid=-1)


hulls = st.lists(
    st.one_of(
        st.builds(lambda x, w, h: Rect(x, x + w, h), st.floats(-4, 4), st.floats(0.05, 2), st.floats(0.1, 2)),
        st.builds(HalfDisk, st.floats(-4, 4), st.floats(0.1, 2)),
        st.builds(VSlit, st.floats(-4, 4), st.floats(0.1, 2)),
    ),
    min_size=1,
    max_size=4,
).map(Hull)


class TestCoverProperties:
    @given(h=hulls, c=st.sampled_from([0.5, 1.0, 1.6, 3.0]))
    def test_structure_and_coverage(self, h, c):
        cv = greedy_cover(h, c)
        rep = coverage_check(h, cv, 4000, seed=1)
        assert rep.disjoint and rep.monotone
        assert rep.passed, rep.violations[:3]

    def test_negative_control(self):
        h = Hull.of(VSlit(0, 1), VSlit(10, 0.5))
        cv = greedy_cover(h, 1.0)
        rep = coverage_check(h, cv.without_last(), 10_000, seed=1)
        assert not rep.passed and rep.violations

    def test_exact_disjointness_detects_overlap(self):
        bad = Cover([CoverElement(Point(0.0, 1.0), 1.0), CoverElement(Point(1.9, 1.0), 1.0)], c=1.0, grid=0.01,
                    eps_stop=0.0)
        assert not intervals_disjoint(bad)
        touching = Cover([CoverElement(Point(0.0, 1.0), 1.0), CoverElement(Point(2.0, 1.0), 1.0)], c=1.0,
                         grid=0.01, eps_stop=0.0)
        assert intervals_disjoint(touching)

    def test_fraction_endpoints_are_exact(self):
        e = CoverElement(Point(0.1, 0.3), 1.6)
        lo = Fraction(0.1) - Fraction(1.6) * Fraction(0.3)
        assert float(lo) == pytest.approx(e.interval()[0])


class TestSums:
    def test_slit_cover(self):
        s = cover_sums(greedy_cover(Hull.of(VSlit(0, 1)), 1.0))
        assert s.sum_sq == 1.0
        assert s.hsiz_lo <= math.pi <= s.hsiz_hi
        assert s.hsiz_hi == pytest.approx(math.pi + 8)
        rho = bound_constants(1.0).rho
        assert s.hcap_lo == pytest.approx(rho**2) == pytest.approx(0.1484, abs=1e-4)
        assert s.hcap_lo <= 0.5 <= s.hcap_hi == 3.5
        assert s.hsiz_lo_valid and s.hcap_hi_valid

    def test_two_slits_against_quadtree(self):
        h = Hull.of(VSlit(0, 1), VSlit(10, 0.5))
        s = cover_sums(greedy_cover(h, 1.0))
        q = hsiz_quadtree(h, 1e-3)
        assert s.sum_sq == 1.25
        assert s.hsiz_lo <= q.value + q.error_bound and q.value - q.error_bound <= s.hsiz_hi

    def test_validity_flags(self):
        s = cover_sums(greedy_cover(Hull.of(VSlit(0, 1)), 0.5))
        assert not s.hsiz_lo_valid and not s.hcap_hi_valid
        s = cover_sums(greedy_cover(Hull.of(VSlit(0, 1)), 1.6))
        assert s.hsiz_lo_valid and not s.hcap_hi_valid

    def test_measured_constant_is_labelled(self):
        s = cover_sums(greedy_cover(Hull.of(VSlit(0, 1)), 1.0), K=2.2, rigorous=False)
        assert s.hcap_hi == 2.2 and not s.hcap_hi_rigorous

    def test_empty(self):
        with pytest.raises(ValueError):
            cover_sums(Cover([], c=1.0, grid=0.1, eps_stop=0.0))
