"""Computation of disk-type surfaces of prescribed mean curvature.

The vector PDE  Delta X = 2 H(X) X_u ^ X_v  with Dirichlet data X = Gamma
on the boundary ring is discretized with P1 finite elements on the polar
disk mesh and solved by damped Picard iteration: one sparse Laplace solve
per step with the right-hand side frozen at the previous iterate, plus
continuation in the field strength to stay in the contraction regime of
the radial growth bound.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.sparse.linalg import splu

from .errors import FieldOutOfDomain, NoConvergence, OutOfRange
from .fields import build_potential_Q
from .mesh import DiskMesh, build_disk_mesh  # noqa: F401  (re-export)


@dataclass
class SolveConfig:
    max_iters: int = 200
    damping: float = 0.5
    residual_tol: float = 1e-8
    update_tol: float = 1e-11
    continuation_steps: int = 4
    reparam_enabled: bool = False
    reparam_sweeps: int = 2

    def __post_init__(self):
        if not (0.0 < self.damping <= 1.0):
            raise OutOfRange("damping must be in (0, 1]")
        if self.residual_tol <= 0 or self.update_tol <= 0:
            raise OutOfRange("tolerances must be positive")
        if self.continuation_steps < 1:
            raise OutOfRange("continuation_steps must be >= 1")


@dataclass
class SurfaceState:
    mesh: DiskMesh
    X: np.ndarray                    # (nv, 3) vertex positions
    boundary_theta: np.ndarray       # Gamma parameter per boundary vertex
    pinned: np.ndarray               # indices into the boundary ring
    iterations: int = 0
    residual: float = np.nan
    iteration_log: list = dc_field(default_factory=list)

    def triangle_derivatives(self):
        """(X_u, X_v) per triangle, each (nt, 3)."""
        g = self.mesh.triangle_gradients(self.X)  # (nt, 2, 3)
        return g[:, 0, :], g[:, 1, :]

    def conformal_factors(self):
        """E = |X_u|^2 per triangle."""
        xu, _ = self.triangle_derivatives()
        return np.einsum("ij,ij->i", xu, xu)


EFLOOR_REL = 1e-14


def conformality_defect(state):
    """max over triangles of (| |X_u|^2 - |X_v|^2 | + 2 |X_u . X_v|) / E,
    with E floored at 1e-14 * median(E) near branch triangles."""
    xu, xv = state.triangle_derivatives()
    e = np.einsum("ij,ij->i", xu, xu)
    g = np.einsum("ij,ij->i", xv, xv)
    f = np.einsum("ij,ij->i", xu, xv)
    floor = max(EFLOOR_REL * np.median(e), 1e-300)
    return float(np.max((np.abs(e - g) + 2.0 * np.abs(f)) / np.maximum(e, floor)))


def _wedge(xu, xv):
    return np.cross(xu, xv)


def energy_F(state, field):
    """Dirichlet part plus 2 int Q(X) . X_u ^ X_v, centroid quadrature."""
    mesh = state.mesh
    xu, xv = state.triangle_derivatives()
    dirichlet = 0.5 * np.sum(
        mesh.quad_weights
        * (np.einsum("ij,ij->i", xu, xu) + np.einsum("ij,ij->i", xv, xv))
    )
    return float(dirichlet + 2.0 * _q_term(state, field, xu, xv))


def energy_G(state, field):
    """Area term int |X_u ^ X_v| plus the same Q coupling; G equals F
    exactly when the map is conformal."""
    mesh = state.mesh
    xu, xv = state.triangle_derivatives()
    area_term = np.sum(mesh.quad_weights * np.linalg.norm(_wedge(xu, xv), axis=1))
    return float(area_term + 2.0 * _q_term(state, field, xu, xv))


def _q_term(state, field, xu, xv):
    if getattr(field, "family", None) == "zero":
        return 0.0
    mesh = state.mesh
    w = _wedge(xu, xv)
    centroids = state.X[mesh.triangles].mean(axis=1)
    total = 0.0
    for t in range(len(mesh.triangles)):
        q = build_potential_Q(field, centroids[t])
        total += mesh.quad_weights[t] * (q @ w[t])
    return total


class _DiskSystem:
    """Prefactorized interior stiffness for repeated Dirichlet solves."""

    def __init__(self, mesh):
        self.mesh = mesh
        K = mesh.stiffness.tocsc()
        self.interior = mesh.interior
        self.boundary = mesh.boundary
        self.K_ii = K[np.ix_(self.interior, self.interior)]
        self.K_ib = K[np.ix_(self.interior, self.boundary)]
        self.lu = splu(self.K_ii.tocsc())

    def solve_dirichlet(self, boundary_values, rhs_interior=None):
        """Solve K X = b with X fixed on the boundary ring."""
        rhs = -self.K_ib @ boundary_values
        if rhs_interior is not None:
            rhs = rhs + rhs_interior
        nv = len(self.mesh.vertices)
        X = np.zeros((nv, boundary_values.shape[1]))
        X[self.boundary] = boundary_values
        X[self.interior] = self.lu.solve(np.asarray(rhs))
        return X


def _assemble_rhs(mesh, X, field):
    """Load vector of -2 H(X) X_u ^ X_v (weak form moves the sign)."""
    g = mesh.triangle_gradients(X)
    w = _wedge(g[:, 0, :], g[:, 1, :])
    centroids = X[mesh.triangles].mean(axis=1)
    r = np.linalg.norm(centroids, axis=1)
    if np.any(~np.isfinite(r)):
        raise FieldOutOfDomain("iterate has non-finite vertices")
    needs_origin = getattr(field, "family", None) not in ("zero", "constant")
    if needs_origin and np.any(r < 1e-10):
        raise FieldOutOfDomain("iterate touches the origin of the field domain")
    h = np.array([field.eval(c) for c in centroids])
    tri_load = -(2.0 * h * mesh.areas / 3.0)[:, None] * w
    nv = len(mesh.vertices)
    b = np.zeros((nv, 3))
    for k in range(3):
        np.add.at(b, mesh.triangles[:, k], tri_load)
    return b


def _rhs_field_values(mesh, X, field):
    g = mesh.triangle_gradients(X)
    w = _wedge(g[:, 0, :], g[:, 1, :])
    centroids = X[mesh.triangles].mean(axis=1)
    h = np.array([field.eval(c) for c in centroids])
    return 2.0 * h[:, None] * w


def solve_residual(mesh, X, field):
    """(inf-norm residual, scale) of the discrete H-system at interior
    vertices, measured per unit of lumped mass."""
    b = _assemble_rhs(mesh, X, field)
    r = (mesh.stiffness @ X - b)[mesh.interior]
    r = r / mesh.lumped_mass[mesh.interior, None]
    scale = max(1.0, float(np.max(np.abs(_rhs_field_values(mesh, X, field)))))
    return float(np.max(np.abs(r))), scale


def arclength_parametrization(curve, n_boundary, n_fine=4096):
    """Boundary parameters theta_j placing the n_boundary ring vertices at
    equal arclength along Gamma, with theta_0 = 0."""
    thetas = np.linspace(0.0, 2.0 * np.pi, n_fine + 1)
    pts = curve.points(thetas)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.arange(n_boundary) / n_boundary * s[-1]
    return np.interp(targets, s, thetas)


def _picard(system, field, X, boundary_values, config):
    mesh = system.mesh
    log = []
    for it in range(config.max_iters):
        b = _assemble_rhs(mesh, X, field)
        X_new = system.solve_dirichlet(boundary_values, rhs_interior=b[system.interior])
        X_next = (1.0 - config.damping) * X + config.damping * X_new
        update = float(np.max(np.abs(X_next - X)))
        X = X_next
        log.append(update)
        if update <= config.update_tol:
            break
    return X, log


def solve(mesh, curve, field, config=None, boundary_theta=None):
    """Converged SurfaceState for the given curve and field.

    The initial guess is the harmonic extension of the boundary data (the
    zero-field solve); the field strength is then ramped up over
    config.continuation_steps levels of Picard iteration.
    """
    if config is None:
        config = SolveConfig()
    n_b = mesh.n_theta
    if boundary_theta is None:
        boundary_theta = arclength_parametrization(curve, n_b)
    boundary_theta = np.asarray(boundary_theta, dtype=float)
    pinned = np.array([0, n_b // 3, 2 * n_b // 3], dtype=int)

    system = _DiskSystem(mesh)
    boundary_values = curve.points(boundary_theta)
    X = system.solve_dirichlet(boundary_values)

    total_log = []
    if getattr(field, "family", None) != "zero":
        for k in range(1, config.continuation_steps + 1):
            fk = field.scaled(k / config.continuation_steps)
            X, log = _picard(system, fk, X, boundary_values, config)
            total_log.extend(log)

    residual, scale = solve_residual(mesh, X, field)
    state = SurfaceState(
        mesh=mesh, X=X, boundary_theta=boundary_theta, pinned=pinned,
        iterations=len(total_log), residual=residual, iteration_log=total_log,
    )
    if residual > config.residual_tol * scale:
        raise NoConvergence(state.iterations, residual)
    if total_log and total_log[-1] > config.update_tol:
        raise NoConvergence(state.iterations, residual)
    return state


def _resolve_with_theta(system, curve, field, config, theta, X_warm):
    boundary_values = curve.points(theta)
    if getattr(field, "family", None) == "zero":
        return system.solve_dirichlet(boundary_values)
    X = X_warm.copy()
    X[system.boundary] = boundary_values
    X, _ = _picard(system, field, X, boundary_values, config)
    return X


def reparametrize_boundary(state, curve, field, config=None, sweeps=None):
    """Coordinate descent over the free boundary parameters (three pinned),
    re-solving per move and accepting only defect-decreasing moves.
    Returns a new SurfaceState; theta stays strictly monotone."""
    if config is None:
        config = SolveConfig()
    if sweeps is None:
        sweeps = config.reparam_sweeps
    mesh = state.mesh
    system = _DiskSystem(mesh)
    theta = state.boundary_theta.copy()
    X = state.X.copy()
    n_b = len(theta)
    pinned = set(int(i) for i in state.pinned)
    defect = conformality_defect(state)

    for _ in range(sweeps):
        improved = False
        for j in range(n_b):
            if j in pinned:
                continue
            prev_t = theta[(j - 1) % n_b]
            next_t = theta[(j + 1) % n_b]
            gap_prev = (theta[j] - prev_t) % (2.0 * np.pi)
            gap_next = (next_t - theta[j]) % (2.0 * np.pi)
            for frac in (0.4, 0.2, 0.1, 0.04, 0.01):
                accepted = False
                for step in (frac * gap_next, -frac * gap_prev):
                    trial = theta.copy()
                    trial[j] = theta[j] + step
                    X_t = _resolve_with_theta(system, curve, field, config, trial, X)
                    cand = SurfaceState(
                        mesh=mesh, X=X_t, boundary_theta=trial, pinned=state.pinned
                    )
                    d = conformality_defect(cand)
                    if d < defect:
                        theta, X, defect = trial, X_t, d
                        improved = accepted = True
                        break
                if accepted:
                    break
        if not improved:
            break

    residual, _ = solve_residual(mesh, X, field)
    return SurfaceState(
        mesh=mesh, X=X, boundary_theta=theta, pinned=state.pinned,
        iterations=state.iterations, residual=residual,
        iteration_log=list(state.iteration_log),
    )
