"""Rank-based max-sum tests for high-dimensional linear regression.

Thin wrapper over the C++ core. The main entry points are `run_tests` for a
single dataset and `run_size` / `run_power` / `run_independence_diag` for
Monte Carlo campaigns; everything takes explicit seeds and is deterministic.
"""

from ._core import (  # noqa: F401
    __version__,
    MaxsumError,
    band,
    cauchy_combine,
    covariance_matrix,
    cv_band_select,
    estimate_precision,
    generate,
    gumbel_pvalue,
    make_beta_design1,
    make_beta_design2,
    marginal_coords,
    minp_combine,
    multiplier_pvalue,
    precision_coords,
    rank,
    rank_sum_ustat,
    run_independence_diag,
    run_power,
    run_size,
    run_tests,
    sample_covariance,
    sample_errors,
    test_rs,
    trace_sigma2_bruteforce,
    trace_sigma2_hat,
    wilcoxon_scores,
)

__all__ = [
    "__version__",
    "MaxsumError",
    "band",
    "cauchy_combine",
    "covariance_matrix",
    "cv_band_select",
    "estimate_precision",
    "generate",
    "gumbel_pvalue",
    "make_beta_design1",
    "make_beta_design2",
    "marginal_coords",
    "minp_combine",
    "multiplier_pvalue",
    "precision_coords",
    "rank",
    "rank_sum_ustat",
    "run_independence_diag",
    "run_power",
    "run_size",
    "run_tests",
    "sample_covariance",
    "sample_errors",
    "test_rs",
    "trace_sigma2_bruteforce",
    "trace_sigma2_hat",
    "wilcoxon_scores",
]
