"""Disk-type surfaces of prescribed mean curvature spanning Jordan curves
in cones, with numerical verification of their geometric properties:
cone enclosure, stability, radial normal positivity, and representability
as radial graphs over spherical domains."""

from . import errors
from .boundary import (
    AxisMap,
    FourierScalar,
    RadialGraphCurve,
    SphericalBoundary,
    axis_at,
    build_curve,
    is_beta_convex,
    is_convex,
    orientation_sign,
)
from .cone_smoothing import (
    SmoothedConeProfile,
    cap_curvature_lower_bound,
    check_enclosure_curvature,
    junction_jumps,
    make_profile,
    min_cap_curvature,
    profile_mean_curvature,
    profile_point,
    revolution_mean_curvature,
    select_delta,
)
from .fields import CurvatureField, build_potential_Q, check_growth, check_monotonicity
from .geometry import (
    ConeSpec,
    c_beta,
    cone_margin,
    radial_project,
    stereographic_south,
    stereographic_south_inverse,
    winding_degree,
)
from .mesh import DiskMesh, build_disk_mesh
from .solver import (
    SolveConfig,
    SurfaceState,
    conformality_defect,
    energy_F,
    energy_G,
    reparametrize_boundary,
    solve,
)
from .verifier import (
    DensityField,
    NormalField,
    VerificationReport,
    check_cone_condition_functions,
    check_enclosure,
    check_radial_normal,
    density_field,
    domain_grid,
    extract_radial_graph,
    gauss_map,
    jacobian_identity_check,
    normal_pde_residual,
    projection_degree,
    stability_eigenvalue,
    verify_surface,
)

__version__ = "0.1.0"
