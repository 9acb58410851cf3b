"""Numpy fallback for the compiled kernels; same signatures and errors."""

import numpy as np


def _check(x, y):
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    if x.size == 0:
        raise ValueError("need at least one pair")
    with np.errstate(invalid="ignore"):
        if not (np.all(x > 0.0) and np.all(y > 0.0)):
            raise ValueError("quotient inputs must be strictly positive")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("quotient inputs must be finite")


def censored_max_quotient_pair(x, y, u=0.0):
    _check(x, y)
    if u > 0.0:
        x = np.maximum(x, u)
        y = np.maximum(y, u)
    return float(np.max(y / x)), float(np.max(x / y))


def max_quotient_pair(x, y):
    return censored_max_quotient_pair(x, y, 0.0)


def indexed_max_quotient_pair(z, ix, iy, u=0.0):
    if ix.shape != iy.shape:
        raise ValueError("index arrays must have equal length")
    if ix.size == 0:
        raise ValueError("need at least one pair")
    m = z.shape[0]
    if ix.min() < 0 or iy.min() < 0 or ix.max() >= m or iy.max() >= m:
        raise IndexError("rank index out of range")
    return censored_max_quotient_pair(z[ix], z[iy], u)


def co_exceedance_counts(x, y, u):
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    ex = x > u
    ey = y > u
    return int(np.count_nonzero(ex & ey)), int(np.count_nonzero(ex)), int(np.count_nonzero(ey))
