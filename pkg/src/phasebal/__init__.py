"""Phase balancing of planar unit-speed agents with per-agent gains.

Simulation (fixed-step, deterministic) and closed-form analysis of the
balanced and splay arrangements reached by gradient steering laws, with a
CLI for reproducible CSV/JSON runs.
"""

from .analysis import (
    ConvergencePoint,
    Interval,
    LocusLine,
    ReachabilityReport,
    ShiftedInitialHeadings,
    TwoAgentClosedForm,
    convergence_point,
    locus_line,
    perturbation_bounds,
    predict_reference_direction,
    reachable_interval,
    shifted_headings,
    synthesize_gains,
    two_agent_closed_form,
    two_agent_headings,
)
from .control import (
    ControlLaw,
    SubgroupPartition,
    ValidationResult,
    circle_center,
    control_input,
    partition_subgroups,
    validate_gain_ordering,
    validate_stability_condition,
)
from .errors import (
    AnalysisScopeError,
    BalancedStartError,
    DegenerateHeadingsError,
    SimulationDivergedError,
    TargetNotReachableError,
)
from .model import (
    GainVector,
    OrderParameter,
    PotentialValue,
    SwarmState,
    as_gain_vector,
    balancing_gradient,
    balancing_hessian,
    balancing_potential,
    classify_critical_point,
    order_parameter,
    splay_gradient,
    splay_potential,
    wrap_angle,
)
from .sim import (
    IntegratorSettings,
    Scenario,
    SimulationTrace,
    detect_steady_headings,
    rotating_frame,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisScopeError",
    "BalancedStartError",
    "ControlLaw",
    "ConvergencePoint",
    "DegenerateHeadingsError",
    "GainVector",
    "IntegratorSettings",
    "Interval",
    "LocusLine",
    "OrderParameter",
    "PotentialValue",
    "ReachabilityReport",
    "Scenario",
    "ShiftedInitialHeadings",
    "SimulationDivergedError",
    "SimulationTrace",
    "SubgroupPartition",
    "SwarmState",
    "TargetNotReachableError",
    "TwoAgentClosedForm",
    "ValidationResult",
    "as_gain_vector",
    "balancing_gradient",
    "balancing_hessian",
    "balancing_potential",
    "circle_center",
    "classify_critical_point",
    "control_input",
    "convergence_point",
    "detect_steady_headings",
    "locus_line",
    "order_parameter",
    "partition_subgroups",
    "perturbation_bounds",
    "predict_reference_direction",
    "reachable_interval",
    "rotating_frame",
    "shifted_headings",
    "simulate",
    "splay_gradient",
    "splay_potential",
    "synthesize_gains",
    "two_agent_closed_form",
    "two_agent_headings",
    "validate_gain_ordering",
    "validate_stability_condition",
    "wrap_angle",
]
