import math

import pytest

from hcaplab.capacity import CapEstimate
from hcaplab.hsiz import AreaResult
from hcaplab.hull import HalfDisk, Hull, Rect, Slit, VSlit
from hcaplab.verify import (
    BUDGETS,
    LOWER,
    UPPER,
    constants_report,
    default_c_grid,
    extremal_scan,
    property_suite,
    theorem1_check,
    verdict,
    verify_many,
)


class TestSandwichCheck:
    def test_slit(self):
        r = theorem1_check(Hull.of(VSlit(0, 1)), "quick")
        assert r.hcap_bound == "exact"
        assert r.ratio == pytest.approx(0.5 / math.pi, rel=1e-2)
        assert r.passed and LOWER < r.ratio_lo <= r.ratio_hi <= UPPER

    def test_rect(self):
        r = theorem1_check(Hull.of(Rect(-2, 2, 1)), "quick", seed=3)
        assert r.passed and r.ratio_hi < 3.5 / (math.pi + 8)

    def test_halfdisk(self):
        r = theorem1_check(Hull.of(HalfDisk(0, 1)), "quick")
        assert r.ratio == pytest.approx(1 / r.hsiz.value)
        assert r.passed

    def test_slit_uses_zipper(self):
        r = theorem1_check(Hull.of(Slit(0, ((0.2, 0.6),))), "quick")
        assert r.hcap.method == "zipper" and r.passed

    def test_verdicts(self):
        assert verdict(0.1, 0.2) == "pass"
        assert verdict(0.01, 0.2) == "inconclusive"
        assert verdict(0.001, 0.01) == "fail"
        assert verdict(1.2, 1.3) == "fail"
        assert verdict(0.1, UPPER) == "pass"

    def test_smaller_budget_widens_interval(self):
        h = Hull.of(Rect(-1, 1, 1), VSlit(3, 0.5))
        q = theorem1_check(h, "quick", seed=1)
        d = theorem1_check(h, "default", seed=1)
        assert q.ratio_hi - q.ratio_lo > d.ratio_hi - d.ratio_lo

    def test_report_dict_has_pass_key(self):
        d = theorem1_check(Hull.of(VSlit(0, 1)), "quick").to_dict()
        assert d["pass"] is True and set(d["hcap"]) >= {"value", "std_error", "bias_bound"}

    def test_many_is_schedule_independent(self):
        items = [("a", Hull.of(Rect(-1, 1, 0.5))), ("b", Hull.of(VSlit(0, 1), VSlit(2, 1)))]
        one = verify_many(items, "quick", 5, workers=1)
        four = verify_many(items, "quick", 5, workers=4)
        assert [r.to_dict() for r in one] == [r.to_dict() for r in four]

    def test_unknown_budget(self):
        with pytest.raises(ValueError):
            theorem1_check(Hull.of(VSlit(0, 1)), "huge")


class TestConstants:
    def test_table(self):
        t = constants_report([0.5, 1.0, 1.6, 2.0])
        assert t.exceeds_1_66
        assert [r[0] for r in t.rows] == [0.5, 1.0, 1.6, 2.0]
        assert t.bound_8_5.startswith("0.0153397")

    def test_small_c_goes_to_zero(self):
        t = constants_report([1e-3, 1e-2, 0.1])
        b = [r[2] for r in t.rows]
        assert b[0] < b[1] < b[2] and b[0] < 1e-100

    def test_grid_argmax_is_interior(self):
        t = constants_report(default_c_grid(500, 5.0))
        assert 1.0 < t.argmax_c < 2.5 and t.argmax_bound > LOWER

    def test_empty(self):
        with pytest.raises(ValueError):
            constants_report([])


class TestScan:
    def test_vslit_is_scale_invariant(self):
        s = extremal_scan("vslit", "quick")
        assert s.min_ratio == pytest.approx(1 / (2 * math.pi), rel=2e-2)
        assert s.max_ratio == pytest.approx(1 / (2 * math.pi), rel=2e-2)
        assert s.in_sandwich

    def test_rect_trend(self):
        s = extremal_scan("rect", "quick")
        ratios = [r.ratio for r in s.reports]
        assert s.in_sandwich
        assert ratios[-1] > ratios[0]

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            extremal_scan("spiral", "quick")


def test_property_suite_quick():
    rep = property_suite(seed=11, budget="quick")
    assert rep.passed, [c.to_dict() for c in rep.checks if not c.passed]
    assert rep.check("nested_pair").passed
    assert rep.check("capacity_inequality").n_cases == BUDGETS["quick"].n_pairs
