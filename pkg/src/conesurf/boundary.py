"""Spherical boundary curves, the beta-convexity machinery, and radial-graph
Jordan curves.

A spherical boundary is a closed regular curve gamma_hat(theta) on S^2,
built as a (possibly Fourier-perturbed) colatitude profile alpha(theta)
around the north pole:

    gamma_hat(theta) = (sin a cos theta, sin a sin theta, cos a),
    a = alpha(theta).

The enclosed domain Omega is the star-shaped region of colatitude < alpha.
"""

import numpy as np

from .errors import CurveLeavesCone, NotBetaConvexAt, OutOfRange, SignChange
from .geometry import ConeSpec

FOURIER_MAX_ORDER = 8


class FourierScalar:
    """Scalar 2pi-periodic function c0 + sum_k (a_k cos k t + b_k sin k t)."""

    def __init__(self, const, cos_coeffs=(), sin_coeffs=()):
        if len(cos_coeffs) > FOURIER_MAX_ORDER or len(sin_coeffs) > FOURIER_MAX_ORDER:
            raise OutOfRange(f"Fourier order capped at {FOURIER_MAX_ORDER}")
        self.const = float(const)
        self.cos_coeffs = np.asarray(cos_coeffs, dtype=float)
        self.sin_coeffs = np.asarray(sin_coeffs, dtype=float)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.const)
        for k, a in enumerate(self.cos_coeffs, start=1):
            out = out + a * np.cos(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            out = out + b * np.sin(k * theta)
        return out

    def deriv(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, a in enumerate(self.cos_coeffs, start=1):
            out = out - a * k * np.sin(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            out = out + b * k * np.cos(k * theta)
        return out

    def to_dict(self):
        return {
            "const": self.const,
            "cos": list(self.cos_coeffs),
            "sin": list(self.sin_coeffs),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d.get("const", 0.0), d.get("cos", ()), d.get("sin", ()))


class SphericalBoundary:
    """Closed curve on S^2 given by a colatitude profile around e3."""

    def __init__(self, alpha):
        self.alpha = alpha
        a = alpha(np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False))
        if np.any(a <= 0.0) or np.any(a >= np.pi / 2):
            raise OutOfRange("colatitude profile must stay in (0, pi/2)")

    @classmethod
    def cap(cls, alpha_c):
        return cls(FourierScalar(alpha_c))

    @classmethod
    def perturbed_cap(cls, alpha_c, cos_coeffs=(), sin_coeffs=()):
        return cls(FourierScalar(alpha_c, cos_coeffs, sin_coeffs))

    def gamma_hat(self, theta):
        theta = np.asarray(theta, dtype=float)
        a = self.alpha(theta)
        sa, ca = np.sin(a), np.cos(a)
        return np.stack([sa * np.cos(theta), sa * np.sin(theta), ca], axis=-1)

    def gamma_hat_d(self, theta):
        theta = np.asarray(theta, dtype=float)
        a = self.alpha(theta)
        ad = self.alpha.deriv(theta)
        sa, ca = np.sin(a), np.cos(a)
        st, ct = np.sin(theta), np.cos(theta)
        du = ad * ca * ct - sa * st
        dv = ad * ca * st + sa * ct
        dw = -ad * sa
        return np.stack([du, dv, dw], axis=-1)

    def domain_samples(self, n):
        """Points of the closed domain Omega (star-shaped sampling)."""
        rng = np.random.default_rng(7)
        theta = rng.uniform(0.0, 2.0 * np.pi, n)
        frac = np.sqrt(rng.uniform(0.0, 1.0, n))  # denser toward the boundary
        a = frac * self.alpha(theta)
        sa, ca = np.sin(a), np.cos(a)
        return np.stack([sa * np.cos(theta), sa * np.sin(theta), ca], axis=-1)

    def boundary_samples(self, n):
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return theta, self.gamma_hat(theta)


def axis_at(boundary, beta, theta, containment_samples, tol=1e-8):
    """Unique beta-cone axis at gamma_hat(theta).

    The two geometric candidates cos(b) ghat +- sin(b) (ghat ^ ghat')/|ghat'|
    are the intersection of the cone through ghat, the plane orthogonal to
    ghat', and S^2; the admissible one must contain all the given domain
    samples in its closed cone.
    """
    g = boundary.gamma_hat(theta)
    gd = boundary.gamma_hat_d(theta)
    n = np.cross(g, gd)
    nn = np.linalg.norm(n)
    if nn < 1e-14:
        raise NotBetaConvexAt(theta, "degenerate tangent at theta")
    n = n / nn
    cb, sb = np.cos(beta), np.sin(beta)
    best = None
    for cand in (cb * g + sb * n, cb * g - sb * n):
        worst = float(np.min(containment_samples @ cand)) - cb
        if worst >= -tol and (best is None or worst > best[1]):
            best = (cand, worst)
    if best is None:
        raise NotBetaConvexAt(theta)
    return best[0]


class AxisMap:
    """Sampled map theta -> cone axis along a beta-convex boundary."""

    def __init__(self, boundary, beta, n_boundary=256, n_domain=2048, tol=1e-8):
        self.boundary = boundary
        self.beta = beta
        thetas, bpts = boundary.boundary_samples(n_boundary)
        samples = np.vstack([boundary.domain_samples(n_domain), bpts])
        self.thetas = thetas
        self.axes = np.array(
            [axis_at(boundary, beta, th, samples, tol=tol) for th in thetas]
        )
        self._samples = samples

    def axis(self, theta):
        """Axis at an arbitrary theta (recomputed, not interpolated)."""
        return axis_at(self.boundary, self.beta, theta, self._samples)


def is_beta_convex(boundary, beta, n_boundary=256, n_domain=2048, tol=1e-8):
    """(flag, margin): flag true iff an admissible axis exists at every
    boundary sample; margin is the worst containment slack observed."""
    thetas, bpts = boundary.boundary_samples(n_boundary)
    samples = np.vstack([boundary.domain_samples(n_domain), bpts])
    cb = np.cos(beta)
    margin = np.inf
    for th in thetas:
        try:
            ax = axis_at(boundary, beta, th, samples, tol=tol)
        except NotBetaConvexAt:
            return False, float("-inf")
        margin = min(margin, float(np.min(samples @ ax)) - cb)
    return True, float(margin)


def is_convex(boundary, n_samples=256, n_domain=1024, tol=1e-9):
    """True iff at every boundary sample the plane spanned by gamma_hat and
    its tangent leaves all domain samples weakly on one side."""
    thetas, bpts = boundary.boundary_samples(n_samples)
    samples = np.vstack([boundary.domain_samples(n_domain), bpts])
    for th in thetas:
        g = boundary.gamma_hat(th)
        gd = boundary.gamma_hat_d(th)
        n = np.cross(g, gd)
        side = samples @ n
        if np.any(side > tol) and np.any(side < -tol):
            return False
    return True


def orientation_sign(boundary, beta, n_samples=256, axis_map=None):
    """-1 when Det[gamma_hat', gamma_hat, axis] < 0 at all samples
    (positively oriented), +1 when > 0 at all; SignChange otherwise."""
    if axis_map is None:
        axis_map = AxisMap(boundary, beta, n_boundary=n_samples)
    thetas = axis_map.thetas
    g = boundary.gamma_hat(thetas)
    gd = boundary.gamma_hat_d(thetas)
    det = np.einsum("ij,ij->i", np.cross(gd, g), axis_map.axes)
    if np.all(det < 0.0):
        return -1
    if np.all(det > 0.0):
        return +1
    raise SignChange("orientation determinant is not of constant sign")


class RadialGraphCurve:
    """Jordan curve Gamma(theta) = g(theta) gamma_hat(theta) over a
    spherical boundary, validated against the configured cone."""

    def __init__(self, boundary, g, beta):
        self.boundary = boundary
        self.g = g
        self.beta = float(beta)

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        gv = np.asarray(self.g(theta), dtype=float)
        return gv[..., None] * self.boundary.gamma_hat(theta)

    def points(self, thetas):
        return self.point(np.asarray(thetas, dtype=float))


def build_curve(boundary, g, beta, n_check=512):
    """Validated radial-graph curve; raises CurveLeavesCone when some
    Gamma(theta) falls outside the closed cone of half-angle beta."""
    curve = RadialGraphCurve(boundary, g, beta)
    thetas = np.linspace(0.0, 2.0 * np.pi, n_check, endpoint=False)
    gv = np.asarray(g(thetas), dtype=float)
    if np.any(gv <= 0.0):
        raise OutOfRange("radial factor g must be strictly positive")
    pts = curve.points(thetas)
    cone = ConeSpec(np.array([0.0, 0.0, 1.0]), beta)
    margins = cone.margin(pts)
    if np.min(margins) < -1e-10:
        raise CurveLeavesCone(
            f"curve leaves the cone: worst margin {np.min(margins):.3e}"
        )
    return curve
