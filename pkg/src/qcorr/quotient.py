"""Quotient correlation coefficients.

For positive paired scores the coefficient is ``f(a, b)`` with
``a = max(y/x)``, ``b = max(x/y)`` and

    f(a, b) = (a + b - 2) / (a*b - 1),

which decreases in each argument and equals 1 on the boundary ``a == 1``
or ``b == 1``. The tail version applies ``f`` after replacing every score
below a threshold ``u`` by ``u`` itself.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from qcorr import kernels
from qcorr.dist import frechet_quantile
from qcorr.marginals import ordinal_ranks, rank_order_statistics

VARIANTS = ("plain", "rank", "empirical", "tail", "tail_rank")
AGGREGATES = ("median", "mean")


@dataclass(frozen=True)
class QuotientSummary:
    """Result of one quotient-correlation computation.

    For replicate-aggregated variants (``rank`` and ``tail_rank``) ``q`` is
    the median (or mean) over replicates, ``max_yx``/``max_xy`` are the
    medians of the per-replicate maxima and ``replicate_q`` lists the
    individual values.
    """

    max_yx: float
    max_xy: float
    q: float
    n: int
    variant: str = "plain"
    threshold: float | None = None
    degenerate: bool = False
    replicate_q: tuple = field(default=())

    @property
    def statistic(self):
        return self.n * self.q


def max_quotient_pair(xs, ys):
    """Return ``(max_i ys[i]/xs[i], max_i xs[i]/ys[i])`` for positive inputs."""
    return kernels.max_quotient_pair(xs, ys)


def quotient_correlation(max_yx, max_xy):
    """Evaluate ``f(max_yx, max_xy)``; both arguments must be >= 1.

    ``f(1, 1)`` is returned as 1: both sequences move identically.
    """
    if not (max_yx >= 1.0 and max_xy >= 1.0):
        raise ValueError("max quotients must both be >= 1")
    a = max_yx - 1.0
    b = max_xy - 1.0
    s = a + b
    if s == 0.0:
        return 1.0
    # a*b - 1 == (a-1)(b-1) + (a-1) + (b-1) keeps precision near 1
    den = a * b + s
    if math.isinf(den):
        return 0.0
    return s / den


def _summary(pair, n, variant, threshold=None, degenerate=None):
    # one of the maxima can fall below 1 when one margin dominates the
    # other everywhere; the coefficient is only defined on [1, inf)^2
    m_yx, m_xy = max(pair[0], 1.0), max(pair[1], 1.0)
    q = quotient_correlation(m_yx, m_xy)
    if degenerate is None:
        degenerate = m_yx == 1.0 and m_xy == 1.0
    return QuotientSummary(m_yx, m_xy, q, n, variant, threshold, bool(degenerate))


def quotient_summary(xs, ys, variant="plain"):
    """Plain quotient correlation of two positive score arrays."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    pair = kernels.max_quotient_pair(xs, ys)
    return _summary(pair, len(xs), variant)


def scores_quotient(scores):
    """Quotient correlation of a :class:`FrechetScores` instance."""
    variant = {"empirical": "empirical", "rank": "rank"}.get(scores.transform, "plain")
    return quotient_summary(scores.xs, scores.ys, variant)


def _aggregate(values, how):
    if how == "median":
        return float(np.median(values))
    if how == "mean":
        return float(np.mean(values))
    raise ValueError(f"aggregate must be one of {AGGREGATES}")


def _rank_replicates(sample, seed, replicates, u, aggregate, variant):
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rx = ordinal_ranks(sample.xs) - 1
    ry = ordinal_ranks(sample.ys) - 1
    n = sample.n
    reps = []
    for r in range(replicates):
        z = rank_order_statistics(seed, r, n)
        pair = kernels.indexed_max_quotient_pair(z, rx, ry, u)
        # rx, ry are permutations, so the replicate is fully censored iff max(z) <= u
        degenerate = bool(z[-1] <= u) if u > 0 else None
        reps.append(_summary(pair, n, variant, degenerate=degenerate))
    qs = [s.q for s in reps]
    return QuotientSummary(
        max_yx=_aggregate([s.max_yx for s in reps], aggregate),
        max_xy=_aggregate([s.max_xy for s in reps], aggregate),
        q=_aggregate(qs, aggregate),
        n=n,
        variant=variant,
        threshold=u if u > 0 else None,
        degenerate=all(s.degenerate for s in reps),
        replicate_q=tuple(qs),
    )


def rank_quotient_correlation(sample, seed, replicates=10, aggregate="median"):
    """Rank-based quotient correlation, aggregated over simulated replicates."""
    return _rank_replicates(sample, seed, replicates, 0.0, aggregate, "rank")


@dataclass(frozen=True)
class ThresholdSpec:
    percentile: float
    resolved_u: float
    per_margin: tuple = ()


def _order_stat_index(p, n):
    # ceil(p*n) with a guard against binary round-up (0.7*10 -> 7.000...01)
    k = math.ceil(p * n - 1e-9)
    return min(max(k, 1), n)


def select_threshold(scores, percentile):
    """Smaller of the two per-margin ``100p``-th percentiles.

    Percentiles are order statistics at 1-based index ``ceil(p*n)``,
    without interpolation.
    """
    if not 0 < percentile < 1:
        raise ValueError("percentile must lie in (0, 1)")
    xs, ys = np.asarray(scores.xs), np.asarray(scores.ys)
    n = xs.size
    if n < 2:
        raise ValueError("need n >= 2")
    k = _order_stat_index(percentile, n) - 1
    ux = float(np.partition(xs, k)[k])
    uy = float(np.partition(ys, k)[k])
    return ThresholdSpec(percentile, min(ux, uy), (ux, uy))


def tail_quotient_correlation(scores, u):
    """Tail quotient correlation with censoring at ``u``.

    Each score becomes ``u + max(score - u, 0)``, i.e. ``max(score, u)``;
    a score equal to ``u`` counts as censored. If every pair is censored in
    both margins the summary is flagged ``degenerate`` (and ``q == 1``).
    """
    if not u > 0:
        raise ValueError("threshold u must be positive")
    xs, ys = scores.xs, scores.ys
    pair = kernels.censored_max_quotient_pair(xs, ys, u)
    fully_censored = not (np.any(np.asarray(xs) > u) or np.any(np.asarray(ys) > u))
    return _summary(pair, len(xs), "tail", threshold=float(u), degenerate=fully_censored)


def tail_quotient_rank(sample, percentile, seed, replicates=10, aggregate="median"):
    """Rank-based tail quotient correlation at a global Frechet threshold.

    ``u = frechet_quantile(percentile)``; each replicate censors its rank
    scores at ``u`` and the per-replicate coefficients are aggregated.
    """
    if not 0 < percentile < 1:
        raise ValueError("percentile must lie in (0, 1)")
    u = frechet_quantile(percentile)
    return _rank_replicates(sample, seed, replicates, u, aggregate, "tail_rank")
