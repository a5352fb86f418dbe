"""Convex-geometry workbench for projection bodies, mixed volumes, and
randomized rearrangement experiments in the plane and in space."""

from .bodies import (
    GeometryError,
    MSpec,
    VPolytope,
    Zonotope,
    ball_body,
    body_from_literal,
    cross_body,
    cube_body,
    hull,
    linear_image,
    lp_ball_body,
    m_add,
    minkowski_sum,
    polar,
    polar_of_zonotope,
    reduced_form,
    regular_polygon,
    scale,
    segment,
    simplex_body,
    solid_simplex,
    sphere_directions,
    support,
    translate,
    unit_ball_volume,
    vertex_set_distance,
    volume,
    zonotope_to_vpolytope,
    zonotope_volume,
)
from .mixed import (
    centroid,
    facets,
    mixed_volume,
    mixed_volume_fit_check,
    mixed_volume_with_segment,
    projection_support,
    shadow_convexity_probe,
    surface_area,
    v1,
)
from .projections import (
    QuadratureSpec,
    RadialMeasure,
    SupportEvaluator,
    cauchy_surface_bound_defect,
    centroid_body_support,
    empirical_centroid_body,
    mixed_projection_support,
    petty_product,
    polar_measure,
    polar_projection_polytope,
    projection_body,
    projection_body_of_zonotope,
)
from .sampling import (
    BlockSpec,
    Density,
    RngStream,
    random_hull,
    random_lp_body,
    random_zonotope,
    rearrange_body_volume,
    sample_matrix,
    sample_point,
    sample_points,
)
from .stats import EstimateWithCI, classify, summarize
from .symmetrize import (
    ShadowSystem,
    chord_profiles,
    chord_shadow_system,
    rearrange_body,
    shadow_at,
    steiner_step_expectation,
    steiner_symmetrize,
)
from .harness import (
    ConfigError,
    estimate,
    run_corollary_1_3,
    run_emp_mixed,
    run_emp_petty_2,
    run_lln,
    run_theorem_1_1,
    run_theorem_1_2,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
