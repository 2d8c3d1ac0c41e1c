"""Equilibrium, effort, and prize-design toolkit for rank-order all-pay contests."""

from .competition import (
    Classification,
    CompetitionQuery,
    CompetitionReport,
    LambdaProfile,
    TransferSign,
    attach_numeric_estimate,
    binary_transfer_sign,
    classify,
    competition_effect_linear,
    competition_effect_numeric,
    lambda_profile,
    utility_gradient,
)
from .continuum import (
    ContinuumEnvironment,
    ConvergenceReport,
    continuum_effort_cdf,
    continuum_strategy,
    convergence_report,
    discretize,
)
from .costs import (
    ContestEnvironment,
    CostFunction,
    ValidationReport,
    cost_eval,
    cost_inverse,
    validate_environment,
)
from .design import BudgetSolution, FeasibleSet, enumerate_vertices, optimize_budget
from .effort import (
    AlphaVector,
    alpha_coefficients,
    expected_cost,
    expected_effort,
    expected_effort_per_type,
)
from .equilibrium import (
    Equilibrium,
    boundaries_closed_form,
    exante_cdf,
    sample,
    solve,
    type_cdf,
    type_index,
    utilities_closed_form,
)
from .errors import (
    ArgumentError,
    CapabilityError,
    ContestError,
    DomainError,
    NumericError,
    StepError,
)
from .kernels import (
    Contest,
    binom_pmf,
    binom_tail,
    is_more_competitive,
    prize_expectation,
    prize_expectation_derivative,
    prize_expectation_inverse,
    type_prize_integral,
)
from .verify import (
    BestResponseReport,
    MonteCarloReport,
    VerificationReport,
    best_response_gap,
    monte_carlo_effort,
    verification_report,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaVector",
    "ArgumentError",
    "BestResponseReport",
    "BudgetSolution",
    "CapabilityError",
    "Classification",
    "CompetitionQuery",
    "CompetitionReport",
    "Contest",
    "ContestEnvironment",
    "ContestError",
    "ContinuumEnvironment",
    "ConvergenceReport",
    "CostFunction",
    "DomainError",
    "Equilibrium",
    "FeasibleSet",
    "LambdaProfile",
    "MonteCarloReport",
    "NumericError",
    "StepError",
    "TransferSign",
    "ValidationReport",
    "VerificationReport",
    "alpha_coefficients",
    "attach_numeric_estimate",
    "best_response_gap",
    "binary_transfer_sign",
    "binom_pmf",
    "binom_tail",
    "boundaries_closed_form",
    "classify",
    "competition_effect_linear",
    "competition_effect_numeric",
    "continuum_effort_cdf",
    "continuum_strategy",
    "convergence_report",
    "cost_eval",
    "cost_inverse",
    "discretize",
    "enumerate_vertices",
    "exante_cdf",
    "expected_cost",
    "expected_effort",
    "expected_effort_per_type",
    "is_more_competitive",
    "lambda_profile",
    "monte_carlo_effort",
    "optimize_budget",
    "prize_expectation",
    "prize_expectation_derivative",
    "prize_expectation_inverse",
    "sample",
    "solve",
    "type_cdf",
    "type_index",
    "type_prize_integral",
    "utilities_closed_form",
    "utility_gradient",
    "verification_report",
    "validate_environment",
]
