"""Command-line pipeline: `solve`, `verify`, `check-domain`, `profile-cone`.

Exit codes: 0 success, 2 invalid configuration, 3 solver failure,
4 verification failure.  All reports are JSON with `"schema": 1`;
meshes are OBJ, tables CSV.  The orchestration is sequential, so
identical configs yield bit-identical reports; `--threads` is accepted
for interface compatibility and `1` is always honored.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .boundary import (
    AxisMap,
    FourierScalar,
    SphericalBoundary,
    build_curve,
    is_beta_convex,
    is_convex,
    orientation_sign,
)
from .cone_smoothing import (
    check_enclosure_curvature,
    junction_jumps,
    make_profile,
    min_cap_curvature,
    profile_mean_curvature,
    select_delta,
)
from .errors import (
    ConesurfError,
    ConfigInvalid,
    IoError,
    NoConvergence,
    NotBetaConvexAt,
    SignChange,
)
from .fields import CurvatureField
from .mesh import build_disk_mesh
from .solver import SolveConfig, SurfaceState, conformality_defect, energy_F, energy_G, solve
from .verifier import verify_surface

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


# ---------------------------------------------------------------------------
# Config parsing


def _require(block, key, kind=None):
    if key not in block:
        raise ConfigInvalid(f"missing config key {key!r}")
    val = block[key]
    if kind is not None and not isinstance(val, kind):
        raise ConfigInvalid(f"config key {key!r} has wrong type")
    return val


def parse_beta(config):
    cone = _require(config, "cone", dict)
    beta = float(_require(cone, "beta"))
    if not (0.0 < beta < np.pi / 2):
        raise ConfigInvalid(f"beta {beta} not in (0, pi/2)")
    return beta


def parse_boundary(config):
    block = _require(config, "boundary", dict)
    kind = block.get("type", "cap")
    alpha_c = float(_require(block, "alpha_c"))
    if kind == "cap":
        boundary = SphericalBoundary.cap(alpha_c)
    elif kind == "perturbed_cap":
        boundary = SphericalBoundary.perturbed_cap(
            alpha_c, block.get("cos", ()), block.get("sin", ())
        )
    else:
        raise ConfigInvalid(f"unknown boundary type {kind!r}")
    gd = block.get("g", {"const": 1.0})
    g = FourierScalar.from_dict(gd)
    return boundary, g


def parse_field(config):
    block = _require(config, "field", dict)
    try:
        return CurvatureField.from_dict(block)
    except (KeyError, TypeError, ConesurfError) as exc:
        raise ConfigInvalid(f"bad field block: {exc}") from exc


def parse_mesh(config):
    block = config.get("mesh", {})
    return int(block.get("n_r", 24)), int(block.get("n_theta", 48))


def parse_solver(config):
    block = config.get("solver", {})
    try:
        return SolveConfig(**block)
    except (TypeError, ConesurfError) as exc:
        raise ConfigInvalid(f"bad solver block: {exc}") from exc


def load_config(path):
    try:
        cfg = io.read_json(path)
    except IoError:
        raise
    if not isinstance(cfg, dict):
        raise ConfigInvalid("config root must be a JSON object")
    return cfg


# ---------------------------------------------------------------------------
# Subcommands


def run_solve(config, out_dir):
    beta = parse_beta(config)
    boundary, g = parse_boundary(config)
    field = parse_field(config)
    n_r, n_theta = parse_mesh(config)
    solve_cfg = parse_solver(config)
    curve = build_curve(boundary, g, beta)
    mesh = build_disk_mesh(n_r, n_theta)
    state = solve(mesh, curve, field, solve_cfg)

    out = config.get("output", {})
    obj_path = Path(out_dir) / out.get("surface_obj", "surface.obj")
    log_path = Path(out_dir) / out.get("solve_log", "solve.json")
    io.write_obj(obj_path, state.X, mesh.triangles)
    io.write_json(log_path, {
        "schema": 1,
        "n_r": n_r,
        "n_theta": n_theta,
        "beta": beta,
        "iterations": state.iterations,
        "residual": state.residual,
        "boundary_theta": state.boundary_theta.tolist(),
        "conformality_defect": conformality_defect(state),
        "energy_F": energy_F(state, field),
        "energy_G": energy_G(state, field),
        "iteration_log": state.iteration_log,
    })
    return EXIT_OK


def run_verify(config, out_dir, surface_path=None):
    beta = parse_beta(config)
    boundary, g = parse_boundary(config)
    field = parse_field(config)
    out = config.get("output", {})
    if surface_path is None:
        surface_path = Path(out_dir) / out.get("surface_obj", "surface.obj")
    log_path = Path(out_dir) / out.get("solve_log", "solve.json")
    X, _ = io.read_obj(surface_path)
    log = io.read_json(log_path)
    mesh = build_disk_mesh(int(log["n_r"]), int(log["n_theta"]))
    if len(X) != len(mesh.vertices):
        raise ConfigInvalid("surface artifact does not match the mesh block")
    state = SurfaceState(
        mesh=mesh, X=X,
        boundary_theta=np.asarray(log["boundary_theta"], dtype=float),
        pinned=np.array([0, mesh.n_theta // 3, 2 * mesh.n_theta // 3]),
    )

    vblock = config.get("verify", {})
    flag, margin = is_beta_convex(
        boundary, beta,
        n_boundary=int(vblock.get("n_boundary", 128)),
        n_domain=int(vblock.get("n_domain", 1024)),
    )
    if not flag:
        raise NotBetaConvexAt(float("nan"), "domain is not beta-convex")
    axis_map = AxisMap(
        boundary, beta,
        n_boundary=int(vblock.get("n_boundary", 128)),
        n_domain=int(vblock.get("n_domain", 1024)),
    )
    report = verify_surface(
        state, field, beta, axis_map=axis_map, boundary=boundary,
        grid_size=int(vblock.get("grid_size", 512)),
        branch_threshold=float(vblock.get("branch_threshold", 1e-6)),
        stability_tol=float(vblock.get("stability_tol", 1e-3)),
        n_axes=int(vblock.get("n_axes", 16)),
        n_probe=int(vblock.get("n_probe", 8)),
    )
    payload = report.to_dict()
    payload["beta_convexity_margin"] = margin
    io.write_json(Path(out_dir) / out.get("report", "report.json"), payload)

    # radial-graph CSV table over a structured grid
    from .verifier import domain_grid, extract_radial_graph

    try:
        grid = domain_grid(boundary, int(vblock.get("grid_size", 512)))
        lam = extract_radial_graph(state, grid)
        rows = [
            (np.arctan2(p[1], p[0]), np.arccos(p[2]), l)
            for p, l in zip(grid, lam)
        ]
        io.write_csv(
            Path(out_dir) / out.get("radial_graph_csv", "radial_graph.csv"),
            ("theta", "phi", "lambda"), rows,
        )
    except ConesurfError:
        pass  # failure already recorded in the report

    return EXIT_OK if report.all_passed else EXIT_VERIFY


def run_check_domain(config, out_dir):
    beta = parse_beta(config)
    boundary, _ = parse_boundary(config)
    vblock = config.get("verify", {})
    n_boundary = int(vblock.get("n_boundary", 256))
    n_domain = int(vblock.get("n_domain", 2048))
    flag, margin = is_beta_convex(boundary, beta, n_boundary, n_domain)
    convex = is_convex(boundary, n_boundary, n_domain)
    orient = None
    orient_err = None
    if flag:
        try:
            orient = orientation_sign(boundary, beta, n_samples=n_boundary)
        except SignChange as exc:
            orient_err = str(exc)
    payload = {
        "schema": 1,
        "beta": beta,
        "beta_convex": flag,
        "beta_convexity_margin": margin,
        "convex": convex,
        "orientation_sign": orient,
        "orientation_error": orient_err,
        "n_boundary": n_boundary,
        "n_domain": n_domain,
        "pass": bool(flag and convex and orient == -1),
    }
    out = config.get("output", {})
    io.write_json(Path(out_dir) / out.get("report", "domain_report.json"), payload)
    return EXIT_OK if payload["pass"] else EXIT_VERIFY


def run_profile_cone(config, out_dir):
    cone = _require(config, "cone", dict)
    beta = parse_beta(config)
    delta = cone.get("delta")
    if delta is None:
        delta = select_delta(beta)
    eps_list = cone.get("eps_list", [0.1, 0.05, 0.025])
    field = None
    if "field" in config:
        field = parse_field(config)

    out = config.get("output", {})
    reports = []
    rows = []
    mins = []
    for eps in eps_list:
        profile = make_profile(beta, float(delta), float(eps))
        jumps = junction_jumps(profile)
        m = min_cap_curvature(profile, 256)
        mins.append(m)
        entry = {
            "eps": float(eps),
            "t_eps": profile.t_eps,
            "junction_jumps": jumps,
            "min_cap_curvature": m,
        }
        if field is not None:
            entry["enclosure"] = check_enclosure_curvature(profile, field)
        reports.append(entry)
        for t in np.linspace(0.0, 4.0 * profile.t_eps, 128):
            rows.append((
                eps, t, float(profile.alpha1(t)), float(profile.alpha2(t)),
                profile_mean_curvature(profile, t),
            ))
    # successive ratio of minimum cap curvatures; ~2 when eps is halved
    ratios = [mins[i + 1] / mins[i] for i in range(len(mins) - 1)]
    payload = {
        "schema": 1,
        "beta": beta,
        "delta": float(delta),
        "profiles": reports,
        "min_curvature_ratios": ratios,
        "pass": all(
            abs(r["junction_jumps"]["value"]) <= 1e-10 * r["eps"]
            and abs(r["junction_jumps"]["first"]) <= 1e-10
            and abs(r["junction_jumps"]["second"]) <= 1e-8 / r["eps"]
            for r in reports
        ),
    }
    io.write_csv(
        Path(out_dir) / out.get("profile_csv", "profile.csv"),
        ("eps", "t", "alpha1", "alpha2", "H_S"), rows,
    )
    io.write_json(Path(out_dir) / out.get("report", "profile_report.json"), payload)
    return EXIT_OK if payload["pass"] else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conesurf",
        description="Prescribed-mean-curvature surfaces in cones: solve and verify",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "verify", "check-domain", "profile-cone"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="1 guarantees bit-reproducible reports")
        if name == "verify":
            p.add_argument("--surface", default=None, help="OBJ surface artifact")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        out_dir = Path(args.out)
        if not out_dir.exists():
            raise IoError(out_dir, f"output directory does not exist: {out_dir}")
        if args.command == "solve":
            return run_solve(config, out_dir)
        if args.command == "verify":
            return run_verify(config, out_dir, args.surface)
        if args.command == "check-domain":
            return run_check_domain(config, out_dir)
        return run_profile_cone(config, out_dir)
    except (ConfigInvalid, IoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ConesurfError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
