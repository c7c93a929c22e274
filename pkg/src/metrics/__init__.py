"""Identity suites, channel distances and convergence fits."""

from .convergence import (
    choi_trace_distance,
    fit_convergence,
    run_convergence_sweep,
    sampled_diamond_lower_bound,
    single_step_order,
    t_squared_scaling_check,
)
from .identities import (
    DEFAULT_TAYLOR_DELTAS,
    check_first_order_taylor,
    check_lemma1,
    check_mdagm_closed_form,
    check_phi_invariance,
    check_swap_identity,
    lemma1_residuals,
)
from .types import ConvergencePoint, ErrorCurve, IdentityReport, ScalingReport, SweepResult, SweepRow

__all__ = [
    "DEFAULT_TAYLOR_DELTAS",
    "ConvergencePoint",
    "ErrorCurve",
    "IdentityReport",
    "ScalingReport",
    "SweepResult",
    "SweepRow",
    "check_first_order_taylor",
    "check_lemma1",
    "check_mdagm_closed_form",
    "check_phi_invariance",
    "check_swap_identity",
    "choi_trace_distance",
    "fit_convergence",
    "lemma1_residuals",
    "run_convergence_sweep",
    "sampled_diamond_lower_bound",
    "single_step_order",
    "t_squared_scaling_check",
]
