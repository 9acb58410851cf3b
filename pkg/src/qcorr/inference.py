"""Gamma tests for (tail) independence, Fisher's Z baseline, tail index."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from qcorr import kernels
from qcorr.dist import erlang2_survival, erlang2_upper_quantile, std_normal_cdf


@dataclass(frozen=True)
class GammaTestReport:
    """Outcome of a gamma test.

    ``p_value`` is the gamma(2, rate) survival at ``statistic``; the null is
    rejected when ``statistic`` strictly exceeds the upper-``alpha`` cutoff.
    """

    statistic: float
    rate: float
    p_value: float
    alpha: float
    reject: bool
    cutoff: float
    n: int
    variant: str = "plain"
    route: str | None = None
    threshold: float | None = None
    threshold_percentile: float | None = None
    degenerate: bool = False

    def to_dict(self):
        return asdict(self)


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")


def _gamma_report(q, n, rate, alpha, **extra):
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_alpha(alpha)
    stat = n * q
    cutoff = erlang2_upper_quantile(alpha, rate)
    p = erlang2_survival(stat, rate)
    # decide on the p-value so p < alpha and the decision never disagree
    # through rounding of the cutoff
    reject = bool(p < alpha)
    return GammaTestReport(stat, rate, p, alpha, reject, cutoff, n, **extra)


def gamma_independence_test(q, n, alpha=0.05, route=None):
    """Gamma test of independence: ``n*q`` against gamma(2, rate 1)."""
    return _gamma_report(q, n, 1.0, alpha, variant="plain", route=route)


def tail_rate(u):
    """Rate ``1 - exp(-1/u)`` of the gamma limit at threshold ``u``."""
    if not u > 0:
        raise ValueError("threshold u must be positive")
    return -math.expm1(-1.0 / u)


def gamma_tail_test(q_u, n, u, alpha=0.05, route=None, percentile=None, degenerate=False):
    """Gamma test of tail independence at threshold ``u`` (Frechet scale).

    The reference law is gamma(2, rate ``1 - exp(-1/u)``). ``route`` records
    how the tail coefficient was obtained (e.g. ``"empirical"`` or
    ``"rank"``). Fully censored data should be passed with
    ``degenerate=True``; the report carries the flag through.
    """
    return _gamma_report(
        q_u,
        n,
        tail_rate(u),
        alpha,
        variant="tail",
        route=route,
        threshold=float(u),
        threshold_percentile=percentile,
        degenerate=degenerate,
    )


def gamma_test(summary, alpha=0.05, route=None, percentile=None):
    """Run the gamma test matching a :class:`~qcorr.quotient.QuotientSummary`."""
    if summary.threshold is None:
        return gamma_independence_test(summary.q, summary.n, alpha, route=route)
    return gamma_tail_test(
        summary.q,
        summary.n,
        summary.threshold,
        alpha,
        route=route,
        percentile=percentile,
        degenerate=summary.degenerate,
    )


@dataclass(frozen=True)
class FisherReport:
    r: float
    w: float
    z: float
    p_value: float
    alpha: float
    reject: bool
    n: int
    alternative: str = "two-sided"

    def to_dict(self):
        return asdict(self)


def fisher_z_test(sample, alpha=0.05, alternative="two-sided"):
    """Fisher's Z test of zero correlation.

    ``alternative`` is ``"two-sided"``, ``"greater"`` or ``"less"``.
    """
    _check_alpha(alpha)
    x = np.asarray(sample.xs, dtype=np.float64)
    y = np.asarray(sample.ys, dtype=np.float64)
    n = x.size
    if n < 4:
        raise ValueError("Fisher's Z test needs n >= 4")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for a constant margin")
    r = float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))
    if abs(r) == 1.0:
        w = math.copysign(math.inf, r)
    else:
        w = 0.5 * math.log((1.0 + r) / (1.0 - r))
    z = w * math.sqrt(n - 3)
    if alternative == "two-sided":
        p = 2.0 * std_normal_cdf(-abs(z))
    elif alternative == "greater":
        p = std_normal_cdf(-z)
    elif alternative == "less":
        p = std_normal_cdf(z)
    else:
        raise ValueError(f"unknown alternative {alternative!r}")
    p = min(float(p), 1.0)
    return FisherReport(r, w, z, p, alpha, bool(p < alpha), n, alternative)


class UndefinedEstimateError(ValueError):
    """No exceedances of the conditioning margin, so the ratio is undefined."""


@dataclass(frozen=True)
class TailIndexEstimate:
    lambda_hat: float
    u: float
    joint_count: int
    marginal_count: int
    condition_on: str = "y"


def tail_index_estimate(scores, u, condition_on="y"):
    """Empirical ``P(X > u | Y > u)`` (or conditioned on ``X``)."""
    if not u > 0:
        raise ValueError("threshold u must be positive")
    both, nx, ny = kernels.co_exceedance_counts(scores.xs, scores.ys, u)
    if condition_on == "y":
        denom = ny
    elif condition_on == "x":
        denom = nx
    else:
        raise ValueError("condition_on must be 'x' or 'y'")
    if denom == 0:
        raise UndefinedEstimateError(f"no exceedances of u={u:g} in the conditioning margin")
    return TailIndexEstimate(both / denom, float(u), int(both), int(denom), condition_on)
