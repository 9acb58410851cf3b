"""Quotient correlation and gamma tests for (tail) independence."""

from qcorr.dist import (
    CdfSpec,
    GammaRef,
    censored_ratio_cdf,
    erlang2_survival,
    erlang2_upper_quantile,
    frechet_cdf,
    frechet_quantile,
    ratio_cdf,
    std_normal_cdf,
)
from qcorr.inference import (
    FisherReport,
    GammaTestReport,
    TailIndexEstimate,
    fisher_z_test,
    gamma_independence_test,
    gamma_tail_test,
    gamma_test,
    tail_index_estimate,
)
from qcorr.marginals import (
    FrechetScores,
    PairedSample,
    empirical_frechet_transform,
    empirical_scores,
    parametric_frechet_transform,
    parametric_scores,
    rank_frechet_scores,
)
from qcorr.models import ModelSpec, generate, gumbel_copula_sample, m4_pair, default_spec
from qcorr.quotient import (
    QuotientSummary,
    max_quotient_pair,
    quotient_correlation,
    quotient_summary,
    rank_quotient_correlation,
    select_threshold,
    tail_quotient_correlation,
    tail_quotient_rank,
)

__version__ = "0.1.0"

__all__ = [
    "CdfSpec",
    "FisherReport",
    "FrechetScores",
    "GammaRef",
    "GammaTestReport",
    "ModelSpec",
    "PairedSample",
    "QuotientSummary",
    "TailIndexEstimate",
    "censored_ratio_cdf",
    "empirical_frechet_transform",
    "empirical_scores",
    "erlang2_survival",
    "erlang2_upper_quantile",
    "fisher_z_test",
    "frechet_cdf",
    "frechet_quantile",
    "gamma_independence_test",
    "gamma_tail_test",
    "gamma_test",
    "generate",
    "gumbel_copula_sample",
    "m4_pair",
    "max_quotient_pair",
    "default_spec",
    "parametric_frechet_transform",
    "parametric_scores",
    "quotient_correlation",
    "quotient_summary",
    "rank_frechet_scores",
    "rank_quotient_correlation",
    "ratio_cdf",
    "select_threshold",
    "std_normal_cdf",
    "tail_index_estimate",
    "tail_quotient_correlation",
    "tail_quotient_rank",
]
