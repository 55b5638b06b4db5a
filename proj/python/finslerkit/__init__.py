"""Numerical Finsler geometry: metrics, connections, curvature, Schwarzian and geodesic dynamics."""

from ._core import (
    Metric,
    bonnet,
    catalog,
    catalog_names,
    conformal_change,
    conjugate_distance,
    flag_curvature,
    geodesic,
    geometry,
    integrability_report,
    invariant_suite,
    metric_from_config,
    mobius_residual,
    projective_factor,
    projective_parameter,
    ricci_tensor,
    run_cli,
    schwarzian_1d,
)

__all__ = [
    "Metric",
    "bonnet",
    "catalog",
    "catalog_names",
    "conformal_change",
    "conjugate_distance",
    "flag_curvature",
    "geodesic",
    "geometry",
    "integrability_report",
    "invariant_suite",
    "metric_from_config",
    "mobius_residual",
    "projective_factor",
    "projective_parameter",
    "ricci_tensor",
    "run_cli",
    "schwarzian_1d",
]
