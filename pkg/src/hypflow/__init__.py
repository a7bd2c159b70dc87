"""Weighted elastic flow of curves in the hyperbolic half-plane.

Profile curves of surfaces of revolution live in the upper half-plane with
the hyperbolic metric; the Willmore flow of such surfaces becomes a
weighted gradient flow of the hyperbolic elastic energy.  The package
bundles the half-plane geometry kernel, Jacobi elliptic special functions,
closed-form elastica and figure-eight theory, a semi-implicit flow solver
with clamped boundary conditions, scenario constructors, embeddedness
checks, serialization, plotting, a CLI, and an acceptance suite.
"""

from .geometry import (
    DiscreteCurve,
    HPoint,
    HVector,
    MoebiusMap,
    apply_moebius,
    elastic_energy,
    hyperbolic_length,
    isometry_to_standard,
    reflect,
    reparametrize_constant_speed,
    scalar_curvature,
    willmore_energy,
    willmore_energy_direct,
)
from .elastica import (
    ElasticaParams,
    FigureEight,
    classify,
    closing_multiplicity,
    figure_eight_segment,
    figure_eight_solve,
    first_integral_residual,
    heart_energy_gap,
    orbitlike_segment_energy,
    parametrize,
)
from .flow import (
    EnergyReport,
    FlowConfig,
    FlowResult,
    WeightFunction,
    run,
    willmore_threshold_check,
)
from .checks import (
    IntersectionReport,
    height_bound_monitor,
    liyau_check,
    norm_bound_monitor,
    self_intersections,
)
from . import scenarios, serialization, special

__all__ = [
    "DiscreteCurve", "HPoint", "HVector", "MoebiusMap", "apply_moebius",
    "elastic_energy", "hyperbolic_length", "isometry_to_standard", "reflect",
    "reparametrize_constant_speed", "scalar_curvature", "willmore_energy",
    "willmore_energy_direct",
    "ElasticaParams", "FigureEight", "classify", "closing_multiplicity",
    "figure_eight_segment", "figure_eight_solve", "first_integral_residual",
    "heart_energy_gap", "orbitlike_segment_energy", "parametrize",
    "EnergyReport", "FlowConfig", "FlowResult", "WeightFunction", "run",
    "willmore_threshold_check",
    "IntersectionReport", "height_bound_monitor", "liyau_check",
    "norm_bound_monitor", "self_intersections",
    "scenarios", "serialization", "special",
]

__version__ = "0.1.0"
