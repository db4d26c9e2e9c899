import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import conesurf as cs
from conesurf.boundary import axis_at
from conesurf.errors import CurveLeavesCone, NotBetaConvexAt, OutOfRange, SignChange

BETA = np.pi / 3
E3 = np.array([0.0, 0.0, 1.0])


class TestFourierScalar:
    def test_values_and_derivative(self):
        f = cs.FourierScalar(1.0, cos_coeffs=[0.2], sin_coeffs=[0.0, 0.1])
        th = 0.7
        assert f(th) == pytest.approx(1.0 + 0.2 * np.cos(th) + 0.1 * np.sin(2 * th))
        assert f.deriv(th) == pytest.approx(-0.2 * np.sin(th) + 0.2 * np.cos(2 * th))

    def test_round_trip(self):
        f = cs.FourierScalar(0.9, cos_coeffs=[0.1, 0.05])
        g = cs.FourierScalar.from_dict(f.to_dict())
        th = np.linspace(0, 2 * np.pi, 17)
        np.testing.assert_allclose(g(th), f(th))

    def test_order_cap(self):
        with pytest.raises(OutOfRange):
            cs.FourierScalar(1.0, cos_coeffs=[0.0] * 9)

    @given(st.floats(-10, 10))
    @settings(max_examples=30, deadline=None)
    def test_derivative_fd(self, th):
        f = cs.FourierScalar(1.0, cos_coeffs=[0.3, 0.1], sin_coeffs=[0.2])
        h = 1e-6
        fd = (f(th + h) - f(th - h)) / (2 * h)
        assert f.deriv(th) == pytest.approx(fd, abs=1e-7)


class TestSphericalBoundary:
    def test_cap_gamma_hat(self):
        ac = 0.4
        b = cs.SphericalBoundary.cap(ac)
        g = b.gamma_hat(0.0)
        np.testing.assert_allclose(
            g, [np.sin(ac), 0.0, np.cos(ac)], atol=1e-14
        )
        assert np.linalg.norm(b.gamma_hat(1.3)) == pytest.approx(1.0)

    def test_gamma_hat_d_fd(self):
        b = cs.SphericalBoundary.perturbed_cap(0.5, cos_coeffs=[0.08], sin_coeffs=[0.03])
        for th in np.linspace(0, 2 * np.pi, 9):
            h = 1e-6
            fd = (b.gamma_hat(th + h) - b.gamma_hat(th - h)) / (2 * h)
            np.testing.assert_allclose(b.gamma_hat_d(th), fd, atol=1e-7)

    def test_domain_samples_inside_cap(self):
        ac = 0.45
        b = cs.SphericalBoundary.cap(ac)
        pts = b.domain_samples(500)
        assert pts.shape == (500, 3)
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
        assert np.min(pts @ E3) >= np.cos(ac) - 1e-12


class TestAxisAt:
    def test_cap_axis_is_e3_when_alpha_equals_beta(self):
        # cap of opening exactly beta: the admissible axis is the cone axis
        b = cs.SphericalBoundary.cap(BETA)
        samples = np.vstack([b.domain_samples(2000), b.boundary_samples(128)[1]])
        for th in np.linspace(0, 2 * np.pi, 7):
            ax = axis_at(b, BETA, th, samples, tol=1e-7)
            np.testing.assert_allclose(ax, E3, atol=1e-9)

    def test_small_cap_axis_tilts_toward_gamma(self):
        ac = 0.3
        b = cs.SphericalBoundary.cap(ac)
        samples = np.vstack([b.domain_samples(2000), b.boundary_samples(128)[1]])
        ax = axis_at(b, BETA, 0.0, samples)
        # axis lies in the plane spanned by e3 and gamma_hat(0), tilted by beta - alpha_c
        assert ax[1] == pytest.approx(0.0, abs=1e-12)
        assert ax @ E3 == pytest.approx(np.cos(BETA - ac), abs=1e-10)
        assert ax @ b.gamma_hat(0.0) == pytest.approx(np.cos(BETA), abs=1e-10)

    def test_axis_continuity(self):
        b = cs.SphericalBoundary.perturbed_cap(0.8 * BETA, cos_coeffs=[0.05])
        amap = cs.AxisMap(b, BETA, n_boundary=128)
        gaps = np.linalg.norm(np.diff(np.vstack([amap.axes, amap.axes[:1]]), axis=0), axis=1)
        assert np.max(gaps) < 0.2

    def test_too_wide_cap_fails(self):
        b = cs.SphericalBoundary.cap(BETA + 0.1)
        samples = np.vstack([b.domain_samples(2000), b.boundary_samples(128)[1]])
        with pytest.raises(NotBetaConvexAt):
            axis_at(b, BETA, 0.2, samples)


class TestBetaConvexity:
    @pytest.mark.parametrize("ac", [0.2, 0.5, BETA - 1e-3])
    def test_caps_within_beta_are_beta_convex(self, ac):
        flag, margin = cs.is_beta_convex(cs.SphericalBoundary.cap(ac), BETA)
        assert flag
        assert margin >= -1e-8

    @pytest.mark.parametrize("ac", [BETA + 0.05, BETA + 0.3])
    def test_caps_beyond_beta_are_not(self, ac):
        flag, _ = cs.is_beta_convex(cs.SphericalBoundary.cap(ac), BETA)
        assert not flag

    def test_perturbed_cap(self):
        b = cs.SphericalBoundary.perturbed_cap(0.8 * BETA, cos_coeffs=[0.1])
        flag, _ = cs.is_beta_convex(b, BETA)
        assert flag

    def test_beta_convex_implies_convex(self):
        # random beta-convex perturbed caps must pass the supporting-plane test
        rng = np.random.default_rng(12)
        n_checked = 0
        while n_checked < 12:
            ac = rng.uniform(0.3, 0.9) * BETA
            coeffs = rng.uniform(-0.05, 0.05, 2)
            b = cs.SphericalBoundary.perturbed_cap(ac, cos_coeffs=coeffs)
            flag, _ = cs.is_beta_convex(b, BETA, n_boundary=64, n_domain=512)
            if not flag:
                continue
            assert cs.is_convex(b, n_samples=64, n_domain=512)
            n_checked += 1

    def test_nonconvex_boundary_detected(self):
        b = cs.SphericalBoundary.perturbed_cap(0.5, cos_coeffs=[0.0, 0.0, 0.35])
        assert not cs.is_convex(b)


class TestOrientation:
    def test_cap_positively_oriented(self):
        b = cs.SphericalBoundary.cap(0.8 * BETA)
        assert cs.orientation_sign(b, BETA) == -1

    def test_reversal_flips_sign(self):
        b = cs.SphericalBoundary.cap(0.8 * BETA)

        class Reversed(cs.SphericalBoundary):
            def gamma_hat(self, theta):
                return b.gamma_hat(-np.asarray(theta))

            def gamma_hat_d(self, theta):
                return -b.gamma_hat_d(-np.asarray(theta))

        r = Reversed(b.alpha)
        assert cs.orientation_sign(r, BETA) == +1

    def test_cap_determinant_value(self):
        # for a cap the determinant reduces to -sin^2(alpha_c) for e3 axis,
        # up to the tilt factor when alpha_c < beta
        ac = BETA
        b = cs.SphericalBoundary.cap(ac)
        amap = cs.AxisMap(b, BETA, n_boundary=32)
        g = b.gamma_hat(amap.thetas)
        gd = b.gamma_hat_d(amap.thetas)
        det = np.einsum("ij,ij->i", np.cross(gd, g), amap.axes)
        np.testing.assert_allclose(det, -np.sin(ac) ** 2, atol=1e-8)


class TestBuildCurve:
    def test_points_shape_and_values(self):
        b = cs.SphericalBoundary.cap(0.5)
        g = cs.FourierScalar(2.0)
        curve = cs.build_curve(b, g, BETA)
        p = curve.point(0.0)
        np.testing.assert_allclose(p, 2.0 * b.gamma_hat(0.0), atol=1e-14)
        pts = curve.points(np.linspace(0, 2 * np.pi, 64))
        assert pts.shape == (64, 3)
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 2.0, atol=1e-12)

    def test_nonpositive_radius_rejected(self):
        b = cs.SphericalBoundary.cap(0.5)
        with pytest.raises(OutOfRange):
            cs.build_curve(b, cs.FourierScalar(0.5, cos_coeffs=[0.6]), BETA)

    def test_curve_outside_cone_rejected(self):
        b = cs.SphericalBoundary.cap(BETA + 0.2)
        with pytest.raises(CurveLeavesCone):
            cs.build_curve(b, cs.FourierScalar(1.0), BETA)
