"""Regression-based Monte Carlo integration.

Fits an analytically-integrable model function to integrand samples by least
squares and uses it as a control variate, so the estimate can never do worse
than the plain sample mean once a constant is in the basis.
"""

from ._core import (
    BasisSet,
    ConvergenceRow,
    EstimateReport,
    IncrementalEstimator,
    IntegrandSpec,
    MisSample,
    ModelFunction,
    Pcg32,
    RegmcError,
    RngConfig,
    SampleBatch,
    Solver,
    cv_estimate,
    draw_batch,
    fit_direct,
    mc_estimate,
    mis_cv_estimate,
    mis_toy_sample,
    mse,
    rel_mse,
    residual_estimate,
    rows_to_csv,
    run_convergence,
    solve_sgd,
)

__all__ = [
    "BasisSet",
    "ConvergenceRow",
    "EstimateReport",
    "IncrementalEstimator",
    "IntegrandSpec",
    "MisSample",
    "ModelFunction",
    "Pcg32",
    "RegmcError",
    "RngConfig",
    "SampleBatch",
    "Solver",
    "cv_estimate",
    "draw_batch",
    "fit_direct",
    "mc_estimate",
    "mis_cv_estimate",
    "mis_toy_sample",
    "mse",
    "rel_mse",
    "residual_estimate",
    "rows_to_csv",
    "run_convergence",
    "solve_sgd",
]

__version__ = "0.1.0"
