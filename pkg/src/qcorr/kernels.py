"""Backend selection for the quotient kernels.

The compiled extension ``qcorr._kernels`` is used when it imports; otherwise
the numpy implementation in ``qcorr._kernels_py`` takes over. Set
``QCORR_PURE_PYTHON=1`` to force the fallback.

All public functions coerce their inputs to contiguous float64 (or intp for
index arrays) before dispatching, so callers may pass any array-like.
"""

import os

import numpy as np

from qcorr import _kernels_py

_compiled = None
if not os.environ.get("QCORR_PURE_PYTHON"):
    try:
        from qcorr import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"


def get_backend(name=None):
    """Return the kernel module called ``name`` ("cython", "numpy" or None for active)."""
    if name is None:
        name = BACKEND
    if name == "numpy":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


_impl = get_backend()


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _idx(a):
    return np.ascontiguousarray(a, dtype=np.intp)


def max_quotient_pair(x, y):
    """Return ``(max(y/x), max(x/y))`` in one pass."""
    return _impl.max_quotient_pair(_f64(x), _f64(y))


def censored_max_quotient_pair(x, y, u):
    """Max quotients after replacing every value below ``u`` by ``u``."""
    return _impl.censored_max_quotient_pair(_f64(x), _f64(y), float(u))


def indexed_max_quotient_pair(z, ix, iy, u=0.0):
    """Max quotients of ``(z[ix], z[iy])``, optionally censored at ``u``."""
    return _impl.indexed_max_quotient_pair(_f64(z), _idx(ix), _idx(iy), float(u))


def co_exceedance_counts(x, y, u):
    """Return ``(#{x>u and y>u}, #{x>u}, #{y>u})``."""
    return _impl.co_exceedance_counts(_f64(x), _f64(y), float(u))
