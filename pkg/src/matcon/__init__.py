"""Two-sided bounds for norms of sums of independent random matrices.

The package computes the variance parameter, the large-deviation parameter,
and the dimensional constant for a model of independent summands, forms the
matched lower/upper estimates that sandwich (E||sum||^2)^(1/2), checks every
supporting matrix inequality against randomized oracles, and reproduces the
optimality examples by exact enumeration plus Monte Carlo.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .linalg import (
    EigDecomposition,
    HermitianMatrix,
    RectMatrix,
    as_hermitian,
    as_rect,
    dilation,
    eig_hermitian,
    frobenius,
    loewner_leq,
    matrix_power,
    spectral_norm,
    trace,
)
from .oracles import (
    KINDS,
    CheckResult,
    FactCase,
    FiniteSummand,
    as_finite_summand,
    brute_force_expected_norm,
    sweep_fact_kind,
    sweep_symmetrization,
    symmetrization_check,
    verify_fact,
)
from .models import (
    EXAMPLE_NAMES,
    CenteredBernoulliBasis,
    Finite,
    FixedGaussian,
    FixedRademacher,
    IndependentSumModel,
    ParetoDiagonal,
    RademacherEntry,
    ScaledBasisRademacher,
    analytic_max_sq,
    analytic_second_moments,
    center,
    make_example,
    make_model,
    model_from_json,
    model_to_json,
    pareto_sample,
    sample_summands,
)
from .bounds import (
    BoundInputs,
    BoundInterval,
    HermitianStats,
    PsdStats,
    RectangularStats,
    case_lower,
    case_upper,
    dimensional_constant,
    large_dev_param,
    main_interval,
    rademacher_bound,
    sweep_rademacher_domination,
    trace_moment_bound,
    variance_param,
)
from .montecarlo import (
    BoundReport,
    Estimate,
    MCConfig,
    MEAN,
    MEDIAN_OF_MEANS,
    bound_report,
    collect_samples,
    empirical_second_moments,
    estimate_max_summand_sq,
    estimate_norm_moment,
)

__all__ = [
    "__version__",
    # linalg
    "EigDecomposition",
    "HermitianMatrix",
    "RectMatrix",
    "as_hermitian",
    "as_rect",
    "dilation",
    "eig_hermitian",
    "frobenius",
    "loewner_leq",
    "matrix_power",
    "spectral_norm",
    "trace",
    # oracles
    "KINDS",
    "CheckResult",
    "FactCase",
    "FiniteSummand",
    "as_finite_summand",
    "brute_force_expected_norm",
    "sweep_fact_kind",
    "sweep_symmetrization",
    "symmetrization_check",
    "verify_fact",
    # models
    "EXAMPLE_NAMES",
    "CenteredBernoulliBasis",
    "Finite",
    "FixedGaussian",
    "FixedRademacher",
    "IndependentSumModel",
    "ParetoDiagonal",
    "RademacherEntry",
    "ScaledBasisRademacher",
    "analytic_max_sq",
    "analytic_second_moments",
    "center",
    "make_example",
    "make_model",
    "model_from_json",
    "model_to_json",
    "pareto_sample",
    "sample_summands",
    # bounds
    "BoundInputs",
    "BoundInterval",
    "HermitianStats",
    "PsdStats",
    "RectangularStats",
    "case_lower",
    "case_upper",
    "dimensional_constant",
    "large_dev_param",
    "main_interval",
    "rademacher_bound",
    "sweep_rademacher_domination",
    "trace_moment_bound",
    "variance_param",
    # montecarlo
    "BoundReport",
    "Estimate",
    "MCConfig",
    "MEAN",
    "MEDIAN_OF_MEANS",
    "bound_report",
    "collect_samples",
    "empirical_second_moments",
    "estimate_max_summand_sq",
    "estimate_norm_moment",
]
