import numpy as np
import pytest

import conesurf as cs


@pytest.fixture(scope="session")
def flat_disk_curve():
    """Circle of radius 1 at height 2 inside the cone of half-angle pi/3,
    whose zero-field solution is the flat disk X = (u, v, 2)."""
    beta = np.pi / 3
    alpha_c = np.arctan2(1.0, 2.0)
    boundary = cs.SphericalBoundary.cap(alpha_c)
    g = cs.FourierScalar(np.sqrt(5.0))
    return cs.build_curve(boundary, g, beta), beta


@pytest.fixture(scope="session")
def flat_disk_state(flat_disk_curve):
    curve, _ = flat_disk_curve
    mesh = cs.build_disk_mesh(16, 32)
    return cs.solve(mesh, curve, cs.CurvatureField("zero"))


@pytest.fixture(scope="session")
def cap_state():
    """Constant H = 1/2 surface over the unit circle at height 2: a cap of
    the sphere of radius 2 centered at (0, 0, 2 +- sqrt(3))."""
    curve, _ = _unit_circle_curve()
    mesh = cs.build_disk_mesh(16, 32)
    field = cs.CurvatureField("constant", h0=0.5)
    return cs.solve(mesh, curve, field, cs.SolveConfig(max_iters=400))


def _unit_circle_curve():
    beta = np.pi / 3
    alpha_c = np.arctan2(1.0, 2.0)
    boundary = cs.SphericalBoundary.cap(alpha_c)
    g = cs.FourierScalar(np.sqrt(5.0))
    return cs.build_curve(boundary, g, beta), beta


@pytest.fixture(scope="session")
def endtoend_scenario():
    """Radial field at 90% of the growth bound over a perturbed cap."""
    beta = np.pi / 3
    boundary = cs.SphericalBoundary.perturbed_cap(0.8 * beta)
    g = cs.FourierScalar(1.0, [0.1])
    curve = cs.build_curve(boundary, g, beta)
    field = cs.CurvatureField("radial", c=0.9 * cs.c_beta(beta))
    return beta, boundary, g, curve, field


@pytest.fixture(scope="session")
def endtoend_state(endtoend_scenario):
    beta, boundary, g, curve, field = endtoend_scenario
    mesh = cs.build_disk_mesh(24, 48)
    state = cs.solve(mesh, curve, field, cs.SolveConfig(max_iters=400))
    return state
