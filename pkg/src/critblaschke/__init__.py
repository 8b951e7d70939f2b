"""Finite Blaschke products of the unit disk and their critical points.

``forward_phi`` sends the free zeros of a normalized product
``f(z) = z * prod beta_a(z)`` to its critical points; ``invert_phi``
recovers the zeros from prescribed critical points by homotopy
continuation. ``metrics`` checks the pulled-back Poincare metric.
"""

from .critical import CriticalResult, critical_polynomial, forward_phi, interior_symmetric, multiplicity_profile
from .disk import (
    BlaschkeProduct,
    Composition,
    DiskAutomorphism,
    PointMultiset,
    beta_eval,
    blaschke_derivative,
    blaschke_eval,
    canonical_order,
    check_disk_point,
    degeneration_limit,
    log_derivative_on_circle,
)
from .errors import (
    BoundaryEscape,
    IndecisiveRoot,
    JacobianSingular,
    NewtonDiverged,
    SlopeAmbiguous,
    StepUnderflow,
)
from .inverse import (
    SolverConfig,
    SolverReport,
    hyperbolic_distance,
    hyperbolic_match_distance,
    invert_phi,
    numerical_jacobian,
    phi_residual,
)
from .metrics import (
    CurvatureReport,
    MetricSample,
    boundary_limit_scan,
    composition_check,
    curvature_residual,
    distance_ratio,
    metric_grid,
    sigma_eval,
    vanishing_order,
)
from .poly import ComplexPolynomial, cluster_roots, find_roots

__all__ = [name for name in dir() if not name.startswith("_")]
