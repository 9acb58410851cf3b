"""Closed-form distribution functions used by the tests and their oracles.

Only three laws are needed: the unit Frechet law ``exp(-1/x)``, the
shape-2 gamma (Erlang-2) law that governs ``n*q``, and the standard normal
for Fisher's Z. Everything here is elementwise and vectorised over numpy
arrays; scalar input returns a Python float.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special


def _arr(x):
    return np.asarray(x, dtype=np.float64)


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


def frechet_cdf(x):
    """Unit Frechet distribution function ``exp(-1/x)`` for ``x > 0``."""
    x = _arr(x)
    if np.any(~(x > 0)):
        raise ValueError("frechet_cdf is defined for x > 0 only")
    return _out(np.exp(-1.0 / x))


def frechet_quantile(p):
    """Inverse of :func:`frechet_cdf`, ``-1/log(p)`` for ``0 < p < 1``."""
    p = _arr(p)
    if np.any(~((p > 0) & (p < 1))):
        raise ValueError("frechet_quantile needs 0 < p < 1")
    return _out(-1.0 / np.log(p))


def frechet_rvs(rng, size):
    """Unit Frechet draws as reciprocals of standard exponentials."""
    return 1.0 / np.maximum(rng.standard_exponential(size), np.finfo(float).tiny)


def erlang2_survival(x, rate=1.0):
    """Survival function ``(1 + rate*x) * exp(-rate*x)`` of gamma(2, rate).

    ``rate`` is the inverse scale, so ``erlang2_survival(x, lam)`` equals
    ``erlang2_survival(lam * x, 1)``.
    """
    x = _arr(x)
    if not rate > 0:
        raise ValueError("rate must be positive")
    if np.any(~(x >= 0)):
        raise ValueError("erlang2_survival needs x >= 0")
    t = rate * x
    return _out((1.0 + t) * np.exp(-t))


def erlang2_cdf(x, rate=1.0):
    x = _arr(x)
    if not rate > 0:
        raise ValueError("rate must be positive")
    # negative x is valid for a CDF; used by KS against sample values
    t = rate * np.maximum(x, 0.0)
    return _out(-np.expm1(-t) - t * np.exp(-t))


def erlang2_upper_quantile(alpha, rate=1.0, maxiter=200):
    """Point ``x`` with ``erlang2_survival(x, rate) == alpha``.

    Bisection on the unit-rate survival over ``[0, 50]`` (widened if
    ``alpha`` is smaller than the survival at 50), then scaled by ``1/rate``.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if not rate > 0:
        raise ValueError("rate must be positive")
    if alpha == 1:
        return 0.0

    def sf(t):
        return (1.0 + t) * math.exp(-t)

    lo, hi = 0.0, 50.0
    while sf(hi) > alpha:
        hi *= 2.0
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sf(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / rate


def std_normal_cdf(z):
    """Standard normal CDF (Cephes ``ndtr``, error far below 1e-7)."""
    return _out(special.ndtr(_arr(z)))


def ratio_cdf(t):
    """CDF ``t/(1+t)`` of ``Y/X`` for independent unit Frechet ``X``, ``Y``."""
    t = _arr(t)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    return _out(t / (1.0 + t))


def censored_ratio_cdf(t, u):
    """CDF of ``max(X, u) / max(Y, u)`` for independent unit Frechet ``X``, ``Y``.

    Parameters
    ----------
    t : float or array_like
        Nonnegative evaluation points.
    u : float
        Censoring threshold, ``u > 0``.

    Notes
    -----
    For ``t < 1`` the value is ``t/(1+t) * (1 - exp(-(1+t)/u))``. For
    ``t >= 1`` it is ``t/(1+t) + exp(-(1+t)/(t*u)) / (1+t)``, which follows
    from the first branch through ``P(R <= t) = 1 - P(1/R < 1/t)``. The jump
    at ``t = 1`` is the mass ``exp(-2/u)`` of pairs censored in both margins.
    """
    if not u > 0:
        raise ValueError("threshold u must be positive")
    t = _arr(t)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    ts = np.where(t > 0, t, 1.0)
    low = t / (1.0 + t) * -np.expm1(-(1.0 + t) / u)
    high = t / (1.0 + t) + np.exp(-(1.0 + ts) / (ts * u)) / (1.0 + t)
    return _out(np.where(t < 1.0, low, high))


@dataclass(frozen=True)
class GammaRef:
    """Shape-2 gamma law with the given rate; reference for ``n*q``."""

    rate: float = 1.0
    shape: int = field(default=2, init=False)

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")

    def cdf(self, x):
        return erlang2_cdf(x, self.rate)

    def sf(self, x):
        return erlang2_survival(x, self.rate)

    def upper_quantile(self, alpha):
        return erlang2_upper_quantile(alpha, self.rate)

    @property
    def mean(self):
        return 2.0 / self.rate


FAMILIES = ("frechet", "normal", "t", "uniform", "exponential", "gamma2")


@dataclass(frozen=True)
class CdfSpec:
    """Descriptor for one of the built-in marginal families.

    ``params`` holds the fixed parameters; families with ``estimate=True``
    take their parameters from a sample through :meth:`fit`.

    ==============  ==========================  ====================
    family          params                      estimated from data
    ==============  ==========================  ====================
    ``frechet``     none                        n/a
    ``normal``      ``mean``, ``sd``            sample mean / sd
    ``t``           ``df``, ``loc``, ``scale``  loc / scale only
    ``uniform``     ``low``, ``high``           not supported
    ``exponential`` ``rate``                    ``1 / mean``
    ``gamma2``      ``rate``                    ``2 / mean``
    ==============  ==========================  ====================
    """

    family: str
    params: dict = field(default_factory=dict)
    estimate: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown distribution family {self.family!r}")
        if self.family == "t" and "df" not in self.params:
            raise ValueError("Student t needs a 'df' parameter")

    def fit(self, sample):
        """Return a copy with parameters estimated from ``sample``."""
        if not self.estimate:
            return self
        s = _arr(sample)
        p = dict(self.params)
        if self.family == "normal":
            p.update(mean=float(s.mean()), sd=float(s.std(ddof=1)))
        elif self.family == "t":
            # scale chosen so the fitted variance matches the sample variance
            df = float(p["df"])
            scale = s.std(ddof=1) * math.sqrt((df - 2) / df) if df > 2 else s.std(ddof=1)
            p.update(loc=float(s.mean()), scale=float(scale))
        elif self.family == "exponential":
            p.update(rate=float(1.0 / s.mean()))
        elif self.family == "gamma2":
            p.update(rate=float(2.0 / s.mean()))
        elif self.family == "uniform":
            raise ValueError("uniform parameters cannot be estimated")
        return CdfSpec(self.family, p, estimate=False)

    def cdf(self, x):
        x = _arr(x)
        p = self.params
        f = self.family
        if f == "frechet":
            with np.errstate(divide="ignore"):
                out = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        elif f == "normal":
            out = special.ndtr((x - p.get("mean", 0.0)) / p.get("sd", 1.0))
        elif f == "t":
            z = (x - p.get("loc", 0.0)) / p.get("scale", 1.0)
            out = special.stdtr(float(p["df"]), z)
        elif f == "uniform":
            lo, hi = p.get("low", 0.0), p.get("high", 1.0)
            out = np.clip((x - lo) / (hi - lo), 0.0, 1.0)
        elif f == "exponential":
            out = -np.expm1(-p.get("rate", 1.0) * np.maximum(x, 0.0))
        else:
            out = erlang2_cdf(x, p.get("rate", 1.0))
        return _out(out)

    def __call__(self, x):
        return self.cdf(x)
