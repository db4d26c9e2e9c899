import numpy as np
import pytest

import conesurf as cs
from conesurf.errors import NotInjectiveAt, Uncovered
from conesurf.solver import SurfaceState
from conesurf.verifier import (
    check_cone_condition_functions,
    check_enclosure,
    check_radial_normal,
    density_field,
    domain_grid,
    extract_radial_graph,
    gauss_map,
    jacobian_identity_check,
    projection_degree,
    stability_eigenvalue,
    vertex_conformal_factor,
)

J01_SQUARED = 5.783185962946785  # first Dirichlet Laplace eigenvalue of the unit disk
BETA = np.pi / 3


def synthetic_state(mesh, fn):
    n_b = mesh.n_theta
    X = np.array([fn(u, v) for u, v in mesh.vertices])
    return SurfaceState(
        mesh=mesh,
        X=X,
        boundary_theta=2 * np.pi * np.arange(n_b) / n_b,
        pinned=np.array([0, n_b // 3, 2 * n_b // 3]),
    )


class TestGaussMap:
    def test_flat_disk_normals(self, flat_disk_state):
        normals = gauss_map(flat_disk_state)
        assert len(normals.branch_triangles) == 0
        np.testing.assert_allclose(
            normals.tri_normals, np.tile([0.0, 0.0, 1.0], (len(flat_disk_state.mesh.triangles), 1)),
            atol=1e-10,
        )
        np.testing.assert_allclose(
            normals.vertex_normals[:, 2], 1.0, atol=1e-10
        )

    def test_cap_normals_are_radial_from_center(self, cap_state):
        normals = gauss_map(cap_state)
        c = np.array([0.0, 0.0, 2.0 + np.sqrt(3.0)])
        u = (cap_state.X - c) / np.linalg.norm(cap_state.X - c, axis=1)[:, None]
        dots = np.einsum("ij,ij->i", normals.vertex_normals, u)
        assert np.max(np.abs(np.abs(dots) - 1.0)) < 5e-3

    def test_cubic_branch_point_flagged(self):
        # w -> w^3 has a genuine branch point at the origin; E ~ 9 r^4
        mesh = cs.build_disk_mesh(16, 32)

        def fn(u, v):
            w = complex(u, v) ** 3
            return np.array([w.real, w.imag, 2.0])

        st = synthetic_state(mesh, fn)
        normals = gauss_map(st, branch_threshold=1e-4)
        assert len(normals.branch_triangles) > 0
        flagged = mesh.centroids[normals.branch_triangles]
        assert np.max(np.linalg.norm(flagged, axis=1)) < 0.2


class TestDensity:
    def test_flat_disk_density_vanishes(self, flat_disk_state):
        normals = gauss_map(flat_disk_state)
        d = density_field(flat_disk_state, cs.CurvatureField("zero"), normals)
        np.testing.assert_allclose(d.p, 0.0, atol=1e-8)
        np.testing.assert_allclose(d.K, 0.0, atol=1e-8)
        np.testing.assert_allclose(d.E, 1.0, atol=1e-8)

    def test_cap_gauss_curvature_and_density(self, cap_state):
        # sphere of radius 2: K = 1/4 and p = E(2 H^2 - K) = E/4
        normals = gauss_map(cap_state)
        field = cs.CurvatureField("constant", h0=0.5)
        d = density_field(cap_state, field, normals)
        r = np.linalg.norm(cap_state.mesh.vertices, axis=1)
        inner = r < 0.8
        np.testing.assert_allclose(d.K[inner], 0.25, rtol=0.1)
        np.testing.assert_allclose(d.p[inner], 0.25 * d.E[inner], rtol=0.1)

    def test_normal_pde_residual_order(self, flat_disk_curve):
        curve, _ = flat_disk_curve
        field = cs.CurvatureField("constant", h0=0.5)
        res = []
        for n_t in (16, 32):
            st = cs.solve(
                cs.build_disk_mesh(n_t // 2, n_t), curve, field,
                cs.SolveConfig(max_iters=400),
            )
            normals = gauss_map(st)
            d = density_field(st, field, normals)
            res.append(cs.normal_pde_residual(st, field, d, normals))
        assert res[0] / res[1] > 1.5

    def test_vertex_conformal_factor_flat(self, flat_disk_state):
        E = vertex_conformal_factor(flat_disk_state)
        np.testing.assert_allclose(E, 1.0, atol=1e-8)


class TestStability:
    def test_flat_disk_first_eigenvalue(self):
        mesh = cs.build_disk_mesh(32, 64)
        st = synthetic_state(mesh, lambda u, v: np.array([u, v, 2.0]))
        mu = stability_eigenvalue(st, np.zeros(len(mesh.vertices)))
        assert mu == pytest.approx(J01_SQUARED, rel=0.02)

    def test_eigenvalue_converges_from_above(self):
        mus = []
        for n_t in (16, 32, 64):
            mesh = cs.build_disk_mesh(n_t // 2, n_t)
            st = synthetic_state(mesh, lambda u, v: np.array([u, v, 2.0]))
            mus.append(stability_eigenvalue(st, np.zeros(len(mesh.vertices))))
        assert mus[0] > mus[1] > mus[2] > J01_SQUARED

    def test_constant_density_shift_is_exact(self):
        # p constant c gives Mp = c M exactly, so mu_1(c) = mu_1(0) - 2c
        mesh = cs.build_disk_mesh(12, 24)
        st = synthetic_state(mesh, lambda u, v: np.array([u, v, 2.0]))
        c = 0.3
        mu0 = stability_eigenvalue(st, np.zeros(len(mesh.vertices)))
        muc = stability_eigenvalue(st, np.full(len(mesh.vertices), c))
        assert muc == pytest.approx(mu0 - 2.0 * c, abs=1e-9)

    def test_endtoend_state_is_stable(self, endtoend_state, endtoend_scenario):
        field = endtoend_scenario[4]
        normals = gauss_map(endtoend_state)
        d = density_field(endtoend_state, field, normals)
        mu = stability_eigenvalue(endtoend_state, d)
        assert mu > 0


class TestEnclosure:
    def test_flat_disk_barrier(self, flat_disk_state):
        rep = check_enclosure(flat_disk_state, BETA, cs.CurvatureField("zero"))
        # phi = 2 - |X|/2, minimized on the boundary where |X| = sqrt(5)
        assert rep["min_phi_closed"] == pytest.approx(2.0 - np.sqrt(5.0) / 2.0, abs=1e-9)
        assert rep["min_phi_interior"] > rep["min_phi_boundary"]
        assert rep["identity_residual"] < 0.2

    def test_identity_residual_shrinks_with_resolution(self, flat_disk_curve):
        curve, _ = flat_disk_curve
        zero = cs.CurvatureField("zero")
        res = []
        for n_t in (16, 32):
            st = cs.solve(cs.build_disk_mesh(n_t // 2, n_t), curve, zero)
            res.append(check_enclosure(st, BETA, zero)["identity_residual"])
        assert res[1] < 0.6 * res[0]

    def test_without_field_skips_identity(self, flat_disk_state):
        rep = check_enclosure(flat_disk_state, BETA)
        assert rep["identity_residual"] is None

    def test_endtoend_barrier_positive(self, endtoend_state, endtoend_scenario):
        beta, field = endtoend_scenario[0], endtoend_scenario[4]
        rep = check_enclosure(endtoend_state, beta, field)
        assert rep["min_phi_closed"] > 0
        assert rep["min_phi_interior"] > 0


class TestConeCondition:
    def test_flat_disk(self, flat_disk_state, flat_disk_curve):
        curve, beta = flat_disk_curve
        amap = cs.AxisMap(curve.boundary, beta, n_boundary=64)
        rep = check_cone_condition_functions(flat_disk_state, amap, beta, n_axes=8)
        assert rep["min_interior_phi_p"] > 0
        assert rep["max_normal_derivative"] < 0


class TestRadialNormal:
    def test_flat_disk(self, flat_disk_state):
        field = cs.CurvatureField("zero")
        normals = gauss_map(flat_disk_state)
        d = density_field(flat_disk_state, field, normals)
        rep = check_radial_normal(flat_disk_state, field, d, normals)
        # N = e3 so N . X = 2 identically
        assert rep["min_NdotX"] == pytest.approx(2.0, abs=1e-8)
        assert rep["min_abs_NdotX_boundary"] == pytest.approx(2.0, abs=1e-8)
        assert rep["pde_residual"] < 1e-6

    def test_endtoend_positive(self, endtoend_state, endtoend_scenario):
        field = endtoend_scenario[4]
        normals = gauss_map(endtoend_state)
        d = density_field(endtoend_state, field, normals)
        rep = check_radial_normal(endtoend_state, field, d, normals)
        assert rep["min_NdotX"] > 0


class TestDegreeAndJacobian:
    def test_flat_disk_degree(self, flat_disk_state):
        assert projection_degree(flat_disk_state) == 1

    def test_mirrored_state_degree(self, flat_disk_state):
        mirrored = SurfaceState(
            mesh=flat_disk_state.mesh,
            X=flat_disk_state.X * np.array([1.0, -1.0, 1.0]),
            boundary_theta=flat_disk_state.boundary_theta,
            pinned=flat_disk_state.pinned,
        )
        assert projection_degree(mirrored) == -1

    def test_flat_disk_jacobian_identity(self, flat_disk_state):
        assert jacobian_identity_check(flat_disk_state) < 5e-3

    def test_endtoend_jacobian_identity(self, endtoend_state):
        assert jacobian_identity_check(endtoend_state) < 5e-3


class TestRadialGraph:
    def test_domain_grid_inside(self):
        b = cs.SphericalBoundary.cap(0.5)
        grid = domain_grid(b, 200)
        np.testing.assert_allclose(np.linalg.norm(grid, axis=1), 1.0, atol=1e-12)
        assert np.min(grid @ np.array([0.0, 0.0, 1.0])) > np.cos(0.5)

    def test_flat_disk_graph_closed_form(self, flat_disk_state, flat_disk_curve):
        # the plane z = 2 seen radially: lambda(p) = 2 / (p . e3)
        curve, _ = flat_disk_curve
        grid = domain_grid(curve.boundary, 100)
        lam = extract_radial_graph(flat_disk_state, grid)
        np.testing.assert_allclose(lam, 2.0 / grid[:, 2], rtol=2e-3)

    def test_sphere_graph_is_constant(self):
        mesh = cs.build_disk_mesh(16, 32)

        def fn(u, v):
            p = np.array([u, v, 2.0])
            return 3.0 * p / np.linalg.norm(p)

        st = synthetic_state(mesh, fn)
        grid = domain_grid(cs.SphericalBoundary.cap(np.arctan2(1.0, 2.0)), 100)
        lam = extract_radial_graph(st, grid)
        np.testing.assert_allclose(lam, 3.0, atol=1e-9)

    def test_uncovered_direction_raises(self, flat_disk_state):
        # direction well outside the cap of opening atan(1/2)
        p = np.array([np.sin(1.0), 0.0, np.cos(1.0)])
        with pytest.raises(Uncovered):
            extract_radial_graph(flat_disk_state, p[None, :])

    def test_folded_surface_raises(self):
        # u -> u^3 - 0.75 u folds three times over x near 0
        mesh = cs.build_disk_mesh(16, 32)
        st = synthetic_state(
            mesh, lambda u, v: np.array([u**3 - 0.75 * u, v, 2.0])
        )
        p = np.array([0.0, 0.1, 2.0])
        p = p / np.linalg.norm(p)
        with pytest.raises(NotInjectiveAt):
            extract_radial_graph(st, p[None, :])


class TestFullReport:
    def test_endtoend_report(self, endtoend_state, endtoend_scenario):
        beta, boundary, g, curve, field = endtoend_scenario
        amap = cs.AxisMap(boundary, beta)
        report = cs.verify_surface(
            endtoend_state, field, beta, axis_map=amap, boundary=boundary,
            grid_size=256,
        )
        assert report.all_passed, [c.name for c in report.checks if not c.passed]
        d = report.to_dict()
        assert d["schema"] == 1
        assert d["pass"] is True
        names = {c["name"] for c in d["checks"]}
        assert "stability_eigenvalue" in names
        assert "branch_point_count" in names

    def test_mirrored_report_fails(self, endtoend_state, endtoend_scenario):
        beta, boundary, g, curve, field = endtoend_scenario
        mirrored = SurfaceState(
            mesh=endtoend_state.mesh,
            X=endtoend_state.X * np.array([1.0, -1.0, 1.0]),
            boundary_theta=endtoend_state.boundary_theta,
            pinned=endtoend_state.pinned,
        )
        report = cs.verify_surface(mirrored, field, beta)
        degree = [c for c in report.checks if "degree" in c.name]
        assert degree and not degree[0].passed
