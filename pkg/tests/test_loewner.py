import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcaplab.capacity import hcap_wos
from hcaplab.hull import Hull, Point, Slit
from hcaplab.loewner import (
    DrivingFunction,
    hcap_zipper,
    loewner_evolve,
    slit_map_apply,
    slit_map_capacity,
    tilted_slit_apply,
    tilted_slit_capacity,
    zip_slit,
)


class TestVerticalSlitMap:
    def test_point_above_tip(self):
        assert slit_map_apply(2j, 0.0, 1.0) == pytest.approx(math.sqrt(3) * 1j)

    def test_point_type_preserved(self):
        p = slit_map_apply(Point(0.0, 2.0), 0.0, 1.0)
        assert isinstance(p, Point) and p.y == pytest.approx(math.sqrt(3))

    @given(x=st.floats(-5, 5), y=st.floats(0.01, 5), h=st.floats(0.1, 3))
    def test_image_in_upper_half_plane(self, x, y, h):
        if abs(x) < 1e-6 and y <= h:
            return
        assert slit_map_apply(complex(x, y), 0.0, h).imag >= 0

    def test_hydrodynamic_normalisation(self):
        z = 1e4 * cmath.exp(0.7j)
        assert ((slit_map_apply(z, 0.0, 1.3) - z) * z).real == pytest.approx(slit_map_capacity(1.3), rel=1e-6)

    def test_slit_boundary_goes_to_axis(self):
        z = np.array([-1e-12 + 0.5j, 1e-12 + 0.5j])
        w = slit_map_apply(z, 0.0, 1.0)
        np.testing.assert_allclose(w.imag, 0, atol=1e-6)
        assert w[0].real < 0 < w[1].real

    def test_rejects_points_on_slit(self):
        with pytest.raises(ValueError):
            slit_map_apply(0.5j, 0.0, 1.0)


class TestTiltedSlitMap:
    @given(alpha=st.floats(0.05, 0.95), length=st.floats(0.1, 3))
    def test_expansion_gives_capacity(self, alpha, length):
        tip = length * cmath.exp(1j * math.pi * alpha)
        z = 1e4 * length * cmath.exp(0.9j)
        w, cap = tilted_slit_apply(z, 0.0, tip)
        assert cap == pytest.approx(tilted_slit_capacity(length, alpha), rel=1e-9)
        assert ((w - z) * z).real == pytest.approx(cap, rel=1e-3)

    def test_vertical_case(self):
        assert tilted_slit_capacity(2.0, 0.5) == pytest.approx(2.0)

    def test_tip_neighbourhood_maps_near_axis(self):
        tip = 0.7 + 0.9j
        w, _ = tilted_slit_apply(tip * (1 + 1e-9j), 0.0, tip)
        assert abs(w.imag) < 1e-3


class TestEvolve:
    @given(x=st.floats(-2, 2), y=st.floats(0.5, 2), T=st.floats(0.0, 0.2))
    def test_constant_driving_closed_form(self, x, y, T):
        z = complex(x, y)
        exact = cmath.sqrt(z * z + 4 * T)
        if exact.imag < 0:
            exact = -exact
        drive = DrivingFunction(np.array([0.0, 1.0]), np.array([0.0, 0.0]))
        res = loewner_evolve(drive, np.array([z]), T, dt=1e-4)
        if not res.swallowed[0]:
            assert abs(res.z[0] - exact) < 1e-5

    def test_swallowed_point(self):
        drive = DrivingFunction(np.array([0.0, 1.0]), np.array([0.0, 0.0]))
        r = loewner_evolve(drive, Point(0.0, 1.0), 0.25, dt=1e-5)
        assert r.swallowed and r.t == pytest.approx(0.25, abs=1e-3)

    def test_unswallowed_point_value(self):
        drive = DrivingFunction(np.array([0.0, 1.0]), np.array([0.0, 0.0]))
        r = loewner_evolve(drive, Point(0.0, 2.0), 0.25)
        assert not r.swallowed
        assert r.z.y == pytest.approx(math.sqrt(3), abs=1e-6)

    def test_driving_validation(self):
        with pytest.raises(ValueError):
            DrivingFunction(np.array([0.1, 1.0]), np.array([0.0, 0.0]))
        with pytest.raises(ValueError):
            DrivingFunction(np.array([0.0, 0.0]), np.array([0.0, 0.0]))

    def test_zipper_driving_reproduces_its_map(self):
        curve = Slit(0.0, ((0.0, 0.5), (0.3, 0.5)))
        probe = np.array([1.0 + 1.0j, -0.5 + 0.3j, 0.2 + 1.5j])
        zr = zip_slit(curve, tol=1e-3, extra=probe)
        ev = loewner_evolve(zr.driving, probe, zr.driving.t_max, dt=2e-5)
        assert not ev.swallowed.any()
        np.testing.assert_allclose(ev.z, zr.mapped, atol=2e-3)


class TestZipper:
    def test_vertical_polyline(self):
        e = hcap_zipper(Slit(0.0, ((0.0, 0.5), (0.0, 1.0))), tol=1e-6)
        assert e.value == pytest.approx(0.5, abs=1e-12)

    def test_semicircle_fills_half_disk(self):
        th = np.linspace(0, math.pi, 200)[1:]
        verts = tuple((float(math.cos(t)), float(math.sin(t))) for t in th[:-1]) + ((-1.0, 1e-9),)
        e = hcap_zipper(Slit(1.0, verts), tol=1e-3)
        assert abs(e.value - 1.0) <= 1e-3 + e.bias_bound

    def test_l_slit_matches_wos(self):
        curve = Slit(0.0, ((0.0, 0.5), (0.3, 0.5)))
        z = hcap_zipper(curve, tol=1e-4)
        w = hcap_wos(Hull.of(curve), 400_000, seed=2)
        assert abs(z.value - w.value) <= 3 * w.std_error + w.bias_bound + z.bias_bound + 1e-4

    def test_refinement_history_converges(self):
        zr = zip_slit(Slit(0.0, ((0.4, 0.4), (0.1, 0.9))), tol=1e-5)
        diffs = np.abs(np.diff([c for _, c in zr.history]))
        assert diffs[-1] < 1e-5 and diffs[-1] < diffs[0]

    def test_bad_input(self):
        with pytest.raises(ValueError):
            hcap_zipper(Slit(0.0, ((0.0, 1.0),)), tol=0)
        with pytest.raises(TypeError):
            hcap_zipper("not a slit")
