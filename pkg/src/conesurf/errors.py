"""Exception types shared across the package."""


class ConesurfError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInput(ConesurfError):
    """A vector was too close to zero to normalize."""


class PoleSingularity(ConesurfError):
    """Stereographic projection evaluated too close to the south pole."""


class OutOfRange(ConesurfError):
    """A scalar parameter is outside its admissible interval."""


class PointOnCurve(ConesurfError):
    """Winding-number query point lies on (or too close to) the loop."""


class QuadratureFailure(ConesurfError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NotBetaConvexAt(ConesurfError):
    """No admissible cone axis exists at the given boundary parameter."""

    def __init__(self, theta, message=None):
        self.theta = theta
        super().__init__(message or f"no admissible cone axis at theta={theta:.6g}")


class SignChange(ConesurfError):
    """Orientation determinant changed sign along the boundary."""


class CurveLeavesCone(ConesurfError):
    """Some point of the boundary curve lies outside the closed cone."""


class AxisSingularity(ConesurfError):
    """Mean-curvature formula evaluated on the axis of revolution."""


class NoConvergence(ConesurfError):
    """Iterative solver hit the iteration cap before meeting tolerances."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )


class FieldOutOfDomain(ConesurfError):
    """A solver iterate left the domain of the curvature field."""


class OriginHit(ConesurfError):
    """The surface passes through (or too close to) the origin."""


class InconsistentDegree(ConesurfError):
    """Winding degrees disagree between probe points."""


class NotInjectiveAt(ConesurfError):
    """A spherical grid point is covered by more than one triangle."""

    def __init__(self, point, count):
        self.point = point
        self.count = count
        super().__init__(f"grid point {point} covered by {count} triangles")


class Uncovered(ConesurfError):
    """A spherical grid point is covered by no triangle."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"grid point {point} not covered by any triangle")


class EigensolverFailure(ConesurfError):
    """The sparse eigensolver failed to converge."""


class ConfigInvalid(ConesurfError):
    """The run configuration failed schema or range validation."""


class IoError(ConesurfError):
    """File input/output failed."""

    def __init__(self, path, message=None):
        self.path = str(path)
        super().__init__(message or f"i/o failure at {self.path}")
