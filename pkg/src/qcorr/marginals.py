"""Transforms that put raw bivariate data on the unit Frechet scale.

Three routes are available:

* ``parametric``: ``-1/log(G(v))`` with ``G`` a known or fitted marginal CDF;
* ``empirical``: the value of rank ``k`` maps to ``-1/log(k/(n+1))``;
* ``rank``: simulated unit Frechet order statistics ``Z_(1) < ... < Z_(n)``
  handed out by within-margin rank, the same ``Z`` sample serving both
  margins so equal ranks receive equal scores.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from qcorr._rng import substream
from qcorr.dist import CdfSpec, frechet_rvs

ROUTES = ("parametric", "empirical", "rank")


class TiesWarning(UserWarning):
    """Raised when a margin contains tied values and ranks are ambiguous."""


@dataclass
class PairedSample:
    """``n`` aligned observations ``(x_i, y_i)``."""

    xs: np.ndarray
    ys: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        if self.xs.ndim != 1 or self.xs.shape != self.ys.shape:
            raise ValueError("xs and ys must be 1-d with equal length")
        if self.xs.size < 2:
            raise ValueError("a paired sample needs n >= 2")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.ys))):
            raise ValueError("paired sample contains non-finite values")

    @property
    def n(self):
        return self.xs.size


@dataclass
class FrechetScores:
    """Paired scores on the unit Frechet scale plus the route that made them."""

    xs: np.ndarray
    ys: np.ndarray
    transform: str
    replicate: int | None = None
    clamped: int = 0

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        if self.transform not in ROUTES:
            raise ValueError(f"unknown transform {self.transform!r}")
        if self.xs.shape != self.ys.shape:
            raise ValueError("score arrays must have equal length")
        for a in (self.xs, self.ys):
            if not (np.all(a > 0) and np.all(np.isfinite(a))):
                raise ValueError("Frechet scores must be positive and finite")

    @property
    def n(self):
        return self.xs.size


def ordinal_ranks(values, warn=True):
    """1-based ranks; ties are broken by order of first occurrence."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.size, dtype=np.intp)
    ranks[order] = np.arange(1, v.size + 1)
    if warn and v.size > 1 and np.any(np.diff(v[order]) == 0):
        warnings.warn("tied values broken by first occurrence", TiesWarning, stacklevel=2)
    return ranks


class EmpiricalCdf:
    """Empirical CDF normalised by ``n + 1`` so sample points map into (0, 1)."""

    def __init__(self, sample):
        s = np.asarray(sample, dtype=np.float64)
        if s.size < 1:
            raise ValueError("empty sample")
        self.sorted_values = np.sort(s)
        self.n = s.size

    def __call__(self, x):
        k = np.searchsorted(self.sorted_values, np.asarray(x, dtype=np.float64), side="right")
        return k / (self.n + 1.0)


def _check_margin(sample):
    s = np.asarray(sample, dtype=np.float64)
    if s.ndim != 1 or s.size < 2:
        raise ValueError("need a 1-d sample with n >= 2")
    if not np.all(np.isfinite(s)):
        raise ValueError("sample contains non-finite values")
    return s


def frechet_grid(n):
    """The fixed scores ``-1/log(k/(n+1))`` for ``k = 1..n``."""
    k = np.arange(1, n + 1, dtype=np.float64)
    return -1.0 / np.log(k / (n + 1.0))


def empirical_frechet_transform(sample):
    """Map each value to ``-1/log(rank/(n+1))``, preserving input order."""
    s = _check_margin(sample)
    return frechet_grid(s.size)[ordinal_ranks(s) - 1]


def empirical_scores(sample):
    """Empirical-route :class:`FrechetScores` for a :class:`PairedSample`."""
    return FrechetScores(
        empirical_frechet_transform(sample.xs),
        empirical_frechet_transform(sample.ys),
        transform="empirical",
    )


def rank_frechet_scores(sample, seed, replicates=10):
    """Rank-route scores, one :class:`FrechetScores` per replicate.

    Replicate ``r`` sorts ``n`` unit Frechet draws from its own substream
    of ``seed`` and assigns ``Z_(rank[x_i])`` and ``Z_(rank[y_i])``.
    Output does not depend on the order replicates are generated in.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rx = ordinal_ranks(sample.xs) - 1
    ry = ordinal_ranks(sample.ys) - 1
    out = []
    for r in range(replicates):
        z = rank_order_statistics(seed, r, sample.n)
        out.append(FrechetScores(z[rx], z[ry], transform="rank", replicate=r))
    return out


def rank_order_statistics(seed, replicate, n):
    """Sorted unit Frechet sample of size ``n`` for one rank replicate."""
    return np.sort(frechet_rvs(substream(seed, "rank-frechet", replicate), n))


def parametric_frechet_transform(sample, cdf):
    """Map each value ``v`` to ``-1/log(G(v))``.

    ``cdf`` is a :class:`~qcorr.dist.CdfSpec` (fitted first if it asks for
    estimation) or any callable CDF. The ``frechet`` family is the identity.
    ``G`` is clamped to ``[1/(4n), 1 - 1/(4n)]``; a :class:`RuntimeWarning`
    reports how many values were clamped.
    """
    s = _check_margin(sample)
    scores, _ = _parametric(s, cdf)
    return scores


def _parametric(s, cdf):
    if isinstance(cdf, CdfSpec):
        if cdf.family == "frechet":
            if not np.all(s > 0):
                raise ValueError("unit Frechet data must be positive")
            return s.copy(), 0
        cdf = cdf.fit(s)
    elif not callable(cdf):
        raise TypeError("cdf must be a CdfSpec or a callable")
    g = np.asarray(cdf(s), dtype=np.float64)
    lo = 1.0 / (4 * s.size)
    clamped = int(np.count_nonzero((g < lo) | (g > 1 - lo)))
    if clamped:
        warnings.warn(f"{clamped} CDF values clamped away from 0/1", RuntimeWarning, stacklevel=3)
    g = np.clip(g, lo, 1 - lo)
    return -1.0 / np.log(g), clamped


def parametric_scores(sample, cdf_x, cdf_y=None):
    """Parametric-route :class:`FrechetScores`; ``cdf_y`` defaults to ``cdf_x``."""
    sx, cx = _parametric(_check_margin(sample.xs), cdf_x)
    sy, cy = _parametric(_check_margin(sample.ys), cdf_x if cdf_y is None else cdf_y)
    return FrechetScores(sx, sy, transform="parametric", clamped=cx + cy)
