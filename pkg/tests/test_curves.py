import math

import numpy as np
import pytest

from meridian4 import curves
from meridian4.curves import (
    CircleCurve, FrenetCurve, MeridianProfile, frenet_frame, profile_eval, quadrature_g,
    spherical_curvature, spherical_curvature_deriv,
)
from meridian4.errors import DomainError, NotUnitSpeed, SingularProfile
from meridian4.linalg4 import gram


def frenet_residual(curve, v, h=1e-4):
    fr = lambda s: curve.frame(s)  # noqa: E731
    d = [(np.asarray(a) - np.asarray(b)) / (2 * h) for a, b in zip(fr(v + h), fr(v - h))]
    r, t, n = curve.frame(v)
    k = curve.kappa(v)
    return max(np.abs(d[0] - t).max(), np.abs(d[1] - k * n + r).max(), np.abs(d[2] + k * t).max())


class TestCircle:
    def test_great_circle_start(self):
        r, t, n = CircleCurve(0.0).frame(0.0)
        np.testing.assert_allclose(r, [1, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(t, [0, 1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(n, [0, 0, 1, 0], atol=1e-15)

    def test_small_circle_geometry(self):
        c = CircleCurve(1.0)
        r, _, _ = c.frame(0.3)
        assert math.hypot(r[0], r[1]) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert r[2] == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    @pytest.mark.parametrize("k0", [0.0, 0.5, 1.0, 2.0])
    def test_frenet_relations(self, k0):
        c = CircleCurve(k0)
        for v in np.linspace(0.2, 2.0, 7):
            assert frenet_residual(c, v) <= 1e-7

    def test_curvature_constant(self):
        c = CircleCurve(2.0)
        assert spherical_curvature(c, 0.1) == 2.0
        assert spherical_curvature_deriv(c, 0.1) == 0.0

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            CircleCurve(1.0, (0.0, 1.0)).frame(1.5)


class TestFrenet:
    def test_zero_curvature_matches_great_circle(self):
        num = FrenetCurve(lambda v: 0.0, (0.0, math.pi))
        ref = CircleCurve(0.0, (0.0, math.pi))
        for v in np.linspace(0.0, math.pi, 41):
            for a, b in zip(num.frame(v), ref.frame(v)):
                np.testing.assert_allclose(a, b, atol=1e-9)

    def test_constant_curvature_matches_circle(self):
        num = FrenetCurve(lambda v: 1.5, (0.0, 2.0), frame0=CircleCurve(1.5).frame(0.0))
        ref = CircleCurve(1.5)
        for v in np.linspace(0.0, 2.0, 17):
            for a, b in zip(num.frame(v), ref.frame(v)):
                np.testing.assert_allclose(a, b, atol=1e-9)

    def test_orthonormal_random(self, wavy_curve, rng):
        curvs = [wavy_curve, CircleCurve(0.7), FrenetCurve(lambda v: math.cos(2 * v), (0, 3))]
        for _ in range(100):
            c = curvs[rng.integers(len(curvs))]
            v = rng.uniform(0, 3)
            r, t, n = frenet_frame(c, v)
            assert np.abs(gram([r, t, n]) - np.eye(3)).max() <= 1e-9

    def test_frenet_residual(self, wavy_curve):
        for v in np.linspace(0.1, 2.9, 15):
            assert frenet_residual(wavy_curve, v) <= 1e-7

    def test_sine_curvature_derivative(self):
        c = FrenetCurve(math.sin, (-1.0, 2.0), v0=0.0)
        assert spherical_curvature_deriv(c, 0.0) == pytest.approx(1.0, abs=1e-8)

    def test_curvature_recovered_by_differences(self, wavy_curve):
        h = 1e-4
        for v in np.linspace(0.2, 2.8, 9):
            dt = (wavy_curve.frame(v + h).t - wavy_curve.frame(v - h).t) / (2 * h)
            assert np.dot(dt, wavy_curve.frame(v).n) == pytest.approx(wavy_curve.kappa(v),
                                                                     abs=1e-7)

    def test_bad_initial_frame(self):
        r = np.array([1.0, 0, 0, 0])
        t = np.array([0, 1.0, 0, 0])
        with pytest.raises(ValueError):
            FrenetCurve(lambda v: 0.0, (0, 1), frame0=(r, t, -np.array([0, 0, 1.0, 0])))


class TestProfiles:
    def test_degenerate_linear(self):
        j = profile_eval(curves.linear_f_profile(1.0, (0, 1)), 0.5)
        assert (j.f, j.df, j.dg, j.kappa_alpha) == (1.5, 1.0, 0.0, 0.0)

    def test_constant(self):
        p = curves.constant_f_profile(1.0, (0, 1), g_offset=0.25)
        j = profile_eval(p, 0.4)
        assert (j.f, j.dg, j.kappa_alpha) == (1.0, 1.0, 0.0)
        assert quadrature_g(p, 0.4) == pytest.approx(0.65, abs=1e-12)

    def test_linear_both(self):
        j = profile_eval(curves.linear_both_profile(0.6, 1.0, (0, 1)), 0.5)
        assert j.f == pytest.approx(1.3)
        assert j.dg == pytest.approx(0.8, abs=1e-15)
        assert j.kappa_alpha == 0.0

    def test_degenerate_g_is_offset(self):
        p = curves.linear_f_profile(1.0, (0, 1), g_offset=-2.0)
        assert all(quadrature_g(p, u) == -2.0 for u in (0.0, 0.3, 1.0))

    def test_sine_quadrature(self):
        p = MeridianProfile(math.sin, math.cos, lambda u: -math.sin(u), lambda u: -math.cos(u),
                            (0.0, 1.0))
        for u in np.linspace(0, 1, 11):
            assert quadrature_g(p, u) == pytest.approx(1 - math.cos(u), abs=1e-10)

    def test_unit_speed(self, rng):
        p = curves.sine_profile(0.5, 1.5, (0, 1))
        for u in rng.uniform(0, 1, 50):
            j = p.jet(u)
            assert abs(j.df**2 + j.dg**2 - 1) <= 1e-12

    def test_kappa_alpha_matches_signed_curvature(self, rng):
        # f' g'' - g' f'' with g'' = -f' f''/g'
        p = curves.sine_profile(0.5, 1.5, (0, 1), eps=-1)
        for u in rng.uniform(0, 1, 20):
            j = p.jet(u)
            d2g = -j.df * j.d2f / j.dg
            assert j.kappa_alpha == pytest.approx(j.df * d2g - j.dg * j.d2f, abs=1e-12)

    def test_fk_derivative_by_differences(self):
        p = curves.sine_profile(0.4, 1.5, (0, 1), frequency=2.0)
        h = 1e-5
        for u in (0.2, 0.5, 0.8):
            fd = (p.jet(u + h).fk - p.jet(u - h).fk) / (2 * h)
            assert p.jet(u).dfk == pytest.approx(fd, abs=1e-7)

    def test_not_unit_speed(self):
        p = MeridianProfile(lambda u: 2 * u, lambda u: 2.0, lambda u: 0.0, lambda u: 0.0, (0, 1))
        with pytest.raises(NotUnitSpeed):
            p.jet(0.5)

    def test_singular(self):
        p = MeridianProfile(lambda u: u, lambda u: 1.0, lambda u: 1.0, lambda u: 0.0, (0, 1))
        with pytest.raises(SingularProfile):
            p.jet(0.5)

    def test_domain(self):
        with pytest.raises(DomainError):
            curves.sine_profile(0.5, 1.5, (0, 1)).jet(1.5)
