"""Numerical analysis of fixed points of complex polynomials and rational maps."""

from . import config
from .analysis import (
    AnalysisReport,
    ContourConfig,
    FixedPointClass,
    FixedPointRecord,
    PeriodicReport,
    analyze,
    classify,
    multiplier,
    periodic_points,
    residue_index_closed,
    residue_index_contour,
    rnfp_witness,
    secondary_witnesses,
    weakly_repelling_witness,
)
from .core import (
    INF,
    MobiusMap,
    Polynomial,
    RationalMap,
    conjugate_map,
    fixed_point_polynomial,
    is_inf,
    mobius_apply,
    poly_compose,
    poly_derivative,
    poly_eval,
)
from .errors import FixdynError
from .geometry import (
    GeometryVerdict,
    NGonSpec,
    Shape,
    construct_from_fixed_points,
    construct_ngon,
    construct_real_part_one_family,
    construct_remark5,
    equidistance_check,
    multipliers_via_products,
    normalize_quadratic,
    real_part_one_check,
    shape_detect,
)
from .julia import EscapeGrid, RenderConfig, escape_radius, escape_time, render, write_image
from .roots import (
    FixedPointLocation,
    RootCluster,
    find_roots,
    fixed_points,
    multiplicity_of_fixed_point,
)

__version__ = "0.1.0"
