"""odeverify: fixed-step ODE integration with convergence verification.

Agreement between two numerical runs (two step sizes, two methods, or
two machines) bounds only the difference of their errors - a necessary
condition for convergence, not a sufficient one.  This package provides
the integrators, diagnostics, and experiment harness to apply that check
honestly: pairwise differencing on exact shared grids, divergence-onset
detection with growth-rate fits for chaotic systems, successive
step-size refinement, and observed-order estimation.
"""

__version__ = "0.1.0"

from .convergence import (
    DifferenceSeries,
    DivergenceReport,
    GrowthRateFit,
    OrderEstimate,
    RefinementOutcome,
    divergence_time,
    error_vs_exact,
    growth_rate,
    make_divergence_report,
    observed_order,
    pair_difference,
    refine_until_converged,
)
from .errors import (
    ConfigurationError,
    InsufficientDataError,
    NoExactSolutionError,
    OdeVerifyError,
    UnsupportedDimensionError,
    UsageError,
)
from .integrators import (
    IntegratorSpec,
    Trajectory,
    euler_step,
    integrate,
    make_spec,
    parse_method,
    rk4_step,
    taylor_coefficients,
    taylor_step,
)
from .stability import (
    AmplificationReport,
    LocalClassification,
    classify_along,
    max_real_eigenvalue,
    scalar_amplification,
)
from .systems import (
    QuadraticOdeSystem,
    build_linear_decay,
    build_lorenz1990,
    exact_solution,
    get_model,
    jacobian,
    model_names,
    rhs,
)

__all__ = [
    "AmplificationReport",
    "ConfigurationError",
    "DifferenceSeries",
    "DivergenceReport",
    "GrowthRateFit",
    "InsufficientDataError",
    "IntegratorSpec",
    "LocalClassification",
    "NoExactSolutionError",
    "OdeVerifyError",
    "OrderEstimate",
    "QuadraticOdeSystem",
    "RefinementOutcome",
    "Trajectory",
    "UnsupportedDimensionError",
    "UsageError",
    "__version__",
    "build_linear_decay",
    "build_lorenz1990",
    "classify_along",
    "divergence_time",
    "error_vs_exact",
    "euler_step",
    "exact_solution",
    "get_model",
    "growth_rate",
    "integrate",
    "jacobian",
    "make_divergence_report",
    "make_spec",
    "max_real_eigenvalue",
    "model_names",
    "observed_order",
    "pair_difference",
    "parse_method",
    "refine_until_converged",
    "rhs",
    "rk4_step",
    "scalar_amplification",
    "taylor_coefficients",
    "taylor_step",
]
