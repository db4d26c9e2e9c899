"""Prescribed mean curvature fields, their vector potential, and the
radial growth / monotonicity checks.

Builtin families (all defined on R^3 minus the origin, so no cone
extension step is needed):

    zero                H = 0
    constant(h0)        H = h0            (solver unit tests only)
    radial(c)           H = c / |p|
    power(c, s)         H = c / |p|^(1+s)
    modulated(c, a)     H = (c + a (p.e3/|p|)) / |p|
"""

import numpy as np
from scipy import integrate

from .errors import OutOfRange, QuadratureFailure
from .geometry import c_beta

_E3 = np.array([0.0, 0.0, 1.0])


class CurvatureField:
    """Mean curvature field H with closed-form gradient."""

    def __init__(self, family, **params):
        self.family = family
        self.params = dict(params)
        if family not in ("zero", "constant", "radial", "power", "modulated"):
            raise OutOfRange(f"unknown field family {family!r}")

    def eval(self, p):
        p = np.asarray(p, dtype=float)
        r = np.linalg.norm(p)
        f = self.family
        if f == "zero":
            return 0.0
        if f == "constant":
            return float(self.params["h0"])
        if f == "radial":
            return float(self.params["c"] / r)
        if f == "power":
            c, s = self.params["c"], self.params["s"]
            return float(c / r ** (1.0 + s))
        c, a = self.params["c"], self.params["a"]
        return float((c + a * (p[2] / r)) / r)

    def grad(self, p):
        p = np.asarray(p, dtype=float)
        r = np.linalg.norm(p)
        f = self.family
        if f in ("zero", "constant"):
            return np.zeros(3)
        if f == "radial":
            return -self.params["c"] * p / r**3
        if f == "power":
            c, s = self.params["c"], self.params["s"]
            return -c * (1.0 + s) * p / r ** (3.0 + s)
        c, a = self.params["c"], self.params["a"]
        # H = c/r + a z / r^2
        return -c * p / r**3 + a * (_E3 / r**2 - 2.0 * p[2] * p / r**4)

    def scaled(self, factor):
        """Field factor * H, used for solver continuation."""
        return _ScaledField(self, float(factor))

    def to_dict(self):
        return {"family": self.family, **self.params}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        return cls(d.pop("family"), **d)

    def __repr__(self):
        return f"CurvatureField({self.family!r}, {self.params})"


class _ScaledField:
    def __init__(self, base, factor):
        self.base = base
        self.factor = factor
        self.family = base.family
        self.params = base.params

    def eval(self, p):
        return self.factor * self.base.eval(p)

    def grad(self, p):
        return self.factor * self.base.grad(p)

    def scaled(self, factor):
        return _ScaledField(self.base, self.factor * factor)


def build_potential_Q(field, p, abs_tol=1e-10):
    """Vector potential Q(p) = (int_0^1 H(t p) t^2 dt) p, so div Q = H.

    The t^2 factor cancels the 1/|tp| singularity of the radial family,
    leaving a smooth integrand for adaptive quadrature.
    """
    p = np.asarray(p, dtype=float)
    r = np.linalg.norm(p)
    if r <= 0.0:
        raise OutOfRange("Q is undefined at the origin")

    def integrand(t):
        if t == 0.0:
            return 0.0
        return field.eval(t * p) * t * t

    val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=abs_tol, limit=200)
    if err > max(abs_tol, 1e-12 * abs(val)) * 100.0:
        raise QuadratureFailure(
            f"quadrature error estimate {err:.3e} exceeds tolerance"
        )
    return val * p


def check_growth(field, beta, samples):
    """min over samples of c_beta - |H(p)| |p|; nonnegative iff the radial
    growth bound holds on the sampled set."""
    cb = c_beta(beta)
    margin = np.inf
    for p in samples:
        p = np.asarray(p, dtype=float)
        margin = min(margin, cb - abs(field.eval(p)) * np.linalg.norm(p))
    return float(margin)


def check_monotonicity(field, samples):
    """min over samples of H(p) + grad H(p) . p, the derivative at lambda=1
    of lambda -> lambda H(lambda p)."""
    margin = np.inf
    for p in samples:
        p = np.asarray(p, dtype=float)
        margin = min(margin, field.eval(p) + field.grad(p) @ p)
    return float(margin)


def divergence_fd(field, p, rel_step=1e-5):
    """Central-difference divergence of Q at p, for consistency tests."""
    p = np.asarray(p, dtype=float)
    h = rel_step * max(1.0, np.linalg.norm(p))
    div = 0.0
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        qp = build_potential_Q(field, p + e)
        qm = build_potential_Q(field, p - e)
        div += (qp[i] - qm[i]) / (2.0 * h)
    return div


def gradient_fd(field, p, rel_step=1e-6):
    """Central-difference gradient of H at p, for consistency tests."""
    p = np.asarray(p, dtype=float)
    h = rel_step * max(1.0, np.linalg.norm(p))
    g = np.zeros(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        g[i] = (field.eval(p + e) - field.eval(p - e)) / (2.0 * h)
    return g
