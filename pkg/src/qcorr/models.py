"""Seeded bivariate generators for the simulation study.

======  ==============================================================
model   construction
======  ==============================================================
``a``   independent unit Frechet pair
``b``   Gumbel (logistic) copula, unit Frechet margins
``c``   survival Gumbel copula, unit Frechet margins
``d``   max-of-moving-maxima pair, L = 30 simulated coefficients
``e``   ``(1/U, 1/(1-U))`` with ``U`` uniform
``f``   bivariate normal with correlation ``rho``
``g``   ``(Z1*E, Z2*E)``, ``Z`` unit Frechet, ``E`` standard exponential
``h``   bivariate Student t with ``df`` degrees of freedom, correlation ``rho``
``m4``  max-of-moving-maxima pair with caller-supplied coefficients
======  ==============================================================

Every model draws from its own named substream of the seed.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from qcorr._rng import substream
from qcorr.dist import frechet_cdf, frechet_rvs
from qcorr.marginals import PairedSample
from qcorr.quotient import quotient_correlation

MODELS = ("a", "b", "c", "d", "e", "f", "g", "h", "m4")
TABLE1_MODELS = ("a", "b", "c", "d", "e", "f", "g", "h")
TAIL_DEPENDENT = ("b", "d", "h")
TAIL_INDEPENDENT = ("a", "c", "e", "f", "g")

# parameter values used throughout the published simulation study
DEFAULT_THETA = 0.4472
DEFAULT_RHO = 0.8
DEFAULT_DF = 4
M4_L = 30

_CHUNK = 100_000


@dataclass(frozen=True)
class ModelSpec:
    model: str
    n: int
    seed: int = 0
    theta: float | None = None
    rho: float | None = None
    df: float | None = None
    m4_coeffs: tuple | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.model in ("b", "c"):
            if self.theta is None:
                raise ValueError(f"model {self.model} requires theta")
            _check_theta(self.theta)
        if self.model in ("f", "h"):
            if self.rho is None:
                raise ValueError(f"model {self.model} requires rho")
            if not -1 < self.rho < 1:
                raise ValueError("rho must lie in (-1, 1)")
        if self.model == "h":
            if self.df is None:
                raise ValueError("model h requires df")
            if not self.df > 0:
                raise ValueError("df must be positive")
        if self.model == "m4":
            if self.m4_coeffs is None:
                raise ValueError("model m4 requires m4_coeffs")
            check_m4_coeffs(self.m4_coeffs)


def default_spec(model, n, seed=0):
    """:class:`ModelSpec` with the default model parameters filled in."""
    kw = {}
    if model in ("b", "c"):
        kw["theta"] = DEFAULT_THETA
    if model in ("f", "h"):
        kw["rho"] = DEFAULT_RHO
    if model == "h":
        kw["df"] = DEFAULT_DF
    return ModelSpec(model, n, seed, **kw)


def _check_theta(theta):
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")


def _log_positive_stable(rng, index, size):
    # Kanter's representation, in logs so small indices neither overflow
    # nor underflow
    if index == 1:
        return np.zeros(size)
    v = rng.uniform(0.0, np.pi, size)
    w = rng.standard_exponential(size)
    a = index
    return (
        np.log(np.sin(a * v))
        - np.log(np.sin(v)) / a
        + (1.0 - a) / a * (np.log(np.sin((1.0 - a) * v)) - np.log(w))
    )


def positive_stable(rng, index, size):
    """Positive stable draws with Laplace transform ``exp(-s**index)``.

    Kanter's representation with ``V ~ U(0, pi)`` and ``W ~ Exp(1)``;
    ``index == 1`` gives the constant 1.
    """
    return np.exp(_log_positive_stable(rng, index, size))


def _gumbel_exponents(theta, n, rng):
    # t_j = (E_j / S)**theta, so the copula uniforms are exp(-t_j)
    log_s = _log_positive_stable(rng, theta, n)
    e = rng.standard_exponential((n, 2))
    return np.exp(theta * (np.log(e) - log_s[:, None]))


def gumbel_copula_sample(theta, n, seed=0):
    """``(n, 2)`` uniforms from the Gumbel copula ``exp(-(s1**(1/theta) + s2**(1/theta))**theta)``.

    Marshall-Olkin frailty sampling: ``S`` positive stable with index
    ``theta``, then ``U_j = exp(-(E_j / S)**theta)`` for independent unit
    exponentials ``E_j``.
    """
    _check_theta(theta)
    return np.exp(-_gumbel_exponents(theta, n, substream(seed, "gumbel-copula")))


def check_m4_coeffs(coeffs, tol=1e-9):
    a = np.asarray(coeffs, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != 2 or a.shape[0] < 1:
        raise ValueError("m4 coefficients must form an L x 2 matrix")
    if not np.all(a > 0):
        raise ValueError("m4 coefficients must be positive")
    if np.any(np.abs(a.sum(axis=0) - 1.0) > tol):
        raise ValueError("each m4 coefficient column must sum to 1")
    return a


@dataclass(frozen=True)
class M4Limit:
    c1: float
    c2: float
    q_limit: float


def m4_limit(coeffs):
    """Almost-sure limit of ``q`` for the max-of-moving-maxima pair.

    ``c1 = max(a1/a2)`` bounds ``x/y`` and ``c2 = max(a2/a1)`` bounds ``y/x``.
    Equal columns give ``c1 == c2 == 1`` and a limit of 1.
    """
    a = check_m4_coeffs(coeffs)
    c1 = float(np.max(a[:, 0] / a[:, 1]))
    c2 = float(np.max(a[:, 1] / a[:, 0]))
    return M4Limit(c1, c2, quotient_correlation(max(c1, 1.0), max(c2, 1.0)))


def _m4_draw(a, n, rng):
    x = np.empty(n)
    y = np.empty(n)
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        z = frechet_rvs(rng, (hi - lo, a.shape[0]))
        x[lo:hi] = (z * a[:, 0]).max(axis=1)
        y[lo:hi] = (z * a[:, 1]).max(axis=1)
    return x, y


def m4_pair(coeffs, n, seed=0):
    """Sample ``X = max_l a_l1 Z_l``, ``Y = max_l a_l2 Z_l`` and the analytic limit."""
    a = check_m4_coeffs(coeffs)
    x, y = _m4_draw(a, n, substream(seed, "m4"))
    return PairedSample(x, y, meta={"model": "m4"}), m4_limit(a)


def simulated_m4_coeffs(seed, L=M4_L):
    """``L`` positive uniforms per column, normalised to sum to one."""
    a = substream(seed, "m4-coeffs").uniform(size=(L, 2))
    # uniform draws can be exactly 0; keep coefficients strictly positive
    a = np.where(a == 0.0, np.finfo(float).tiny, a)
    return a / a.sum(axis=0)


def _correlated_normals(rng, rho, n):
    z = rng.standard_normal((n, 2))
    return z[:, 0], rho * z[:, 0] + np.sqrt(1.0 - rho * rho) * z[:, 1]


def generate(spec):
    """Draw ``spec.n`` pairs from ``spec.model``; deterministic in ``spec``."""
    m, n = spec.model, spec.n
    rng = substream(spec.seed, "model", m)
    meta = {"model": m, "seed": spec.seed}
    if m == "a":
        x, y = frechet_rvs(rng, n), frechet_rvs(rng, n)
    elif m in ("b", "c"):
        t = _gumbel_exponents(spec.theta, n, rng)
        if m == "b":
            # -1/log(exp(-t)) without the round trip
            v = 1.0 / t
        else:
            # copula values are the joint survival probabilities: F(X) = 1 - exp(-t)
            v = -1.0 / np.log(-np.expm1(-t))
        x, y = v[:, 0], v[:, 1]
        meta["theta"] = spec.theta
    elif m == "d":
        a = simulated_m4_coeffs(spec.seed)
        x, y = _m4_draw(a, n, rng)
        meta["m4_coeffs"] = a.tolist()
    elif m == "m4":
        a = check_m4_coeffs(spec.m4_coeffs)
        x, y = _m4_draw(a, n, rng)
        meta["m4_coeffs"] = a.tolist()
    elif m == "e":
        # [tiny, 1) keeps both reciprocals finite
        u = rng.uniform(np.finfo(float).tiny, 1.0, n)
        x, y = 1.0 / u, 1.0 / (1.0 - u)
    elif m == "f":
        x, y = _correlated_normals(rng, spec.rho, n)
        meta["rho"] = spec.rho
    elif m == "g":
        e = rng.standard_exponential(n)
        x, y = frechet_rvs(rng, n) * e, frechet_rvs(rng, n) * e
    else:
        zx, zy = _correlated_normals(rng, spec.rho, n)
        w = np.sqrt(rng.chisquare(spec.df, n) / spec.df)
        x, y = zx / w, zy / w
        meta.update(rho=spec.rho, df=spec.df)
    return PairedSample(x, y, meta=meta)


def marginal_cdf(spec):
    """Exact marginal CDF of the model (both margins share it)."""
    m = spec.model
    if m in ("a", "b", "c", "d", "m4"):
        return frechet_cdf
    if m == "e":
        return lambda v: np.where(v > 1.0, 1.0 - 1.0 / np.maximum(v, 1.0), 0.0)
    if m == "f":
        return special.ndtr
    if m == "g":
        # P(Z*E <= v) = E[exp(-E/v)] = v / (1 + v)
        return lambda v: np.where(v > 0, v / (1.0 + np.abs(v)), 0.0)
    return lambda v: special.stdtr(spec.df, v)
