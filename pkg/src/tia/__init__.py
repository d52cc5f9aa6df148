"""tia: tetrahedral interpolation analysis.

Projected-circumradius quality measures for arbitrary tetrahedra, degree-k
Lagrange interpolants on the principal lattice, exact Sobolev seminorms of
polynomial interpolation errors, and sweep harnesses that compare the
projected-circumradius error bound against the circumsphere alternative on
degenerating element families.
"""

from . import errors
from .experiments import (
    CSV_COLUMNS,
    ElementFamily,
    ErrorRatioRecord,
    b_lower_bound,
    bound_sweep,
    error_ratio,
    function_battery,
    make_family,
    per_element_max,
    random_tetrahedra,
    records_to_csv,
    sliver_probe,
    sliver_rejection_demo,
    sliver_tetrahedron,
)
from .interpolation import (
    LatticePoint,
    interpolate,
    interpolate_function,
    lagrange_basis,
    lattice_points,
    multi_indices,
)
from .polynomials import Polynomial, X, Y, Z, polynomial_from_dict
from .projection import (
    DEFAULT_PHI,
    FacetProjectionReport,
    GeometryReport,
    ProjectedTriangle,
    ThetaSelection,
    distortion_bound_constant,
    distortion_bound_terms,
    gap_constant,
    geometry_report,
    project_theta,
    projected_circumradius,
    projection_floor_constant,
    r_p,
    r_theta,
    select_theta,
)
from .seminorms import (
    SeminormSpec,
    integrate_polynomial,
    p_rule_violation,
    scaling_identity_check,
    seminorm,
    validate_p,
)
from .simplex import (
    REFERENCE_CASE_I,
    REFERENCE_CASE_II,
    AffineMap,
    MatrixFactorization,
    StandardPosition,
    Tetrahedron,
    diameter,
    facet_circumradius,
    inradius_circumradius,
    matrix_factorization,
    reference_tetrahedron,
    scale_axes,
    squeeze_yz,
    standard_position,
    tetrahedron_from_dict,
    uniform_scale,
    validate_tetrahedron,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
