# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled single-pass kernels behind :mod:`qcorr.kernels`."""

from libc.math cimport INFINITY


cdef inline int _check(double xi, double yi) noexcept nogil:
    # NaN fails both comparisons
    if not (xi > 0.0 and yi > 0.0):
        return 1
    if not (xi < INFINITY and yi < INFINITY):
        return 2
    return 0


cdef object _raise(int code):
    if code == 1:
        raise ValueError("quotient inputs must be strictly positive")
    raise ValueError("quotient inputs must be finite")


def censored_max_quotient_pair(const double[::1] x, const double[::1] y, double u=0.0):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double xi, yi, r, m_yx = 0.0, m_xy = 0.0
    cdef int code = 0
    if y.shape[0] != n:
        raise ValueError("x and y must have equal length")
    if n == 0:
        raise ValueError("need at least one pair")
    with nogil:
        for i in range(n):
            xi = x[i]
            yi = y[i]
            code = _check(xi, yi)
            if code:
                break
            if xi < u:
                xi = u
            if yi < u:
                yi = u
            r = yi / xi
            if r > m_yx:
                m_yx = r
            r = xi / yi
            if r > m_xy:
                m_xy = r
    if code:
        _raise(code)
    return m_yx, m_xy


def max_quotient_pair(const double[::1] x, const double[::1] y):
    return censored_max_quotient_pair(x, y, 0.0)


def indexed_max_quotient_pair(const double[::1] z, const Py_ssize_t[::1] ix,
                              const Py_ssize_t[::1] iy, double u=0.0):
    cdef Py_ssize_t i, a, b, m = z.shape[0], n = ix.shape[0]
    cdef double xi, yi, r, m_yx = 0.0, m_xy = 0.0
    cdef int code = 0
    if iy.shape[0] != n:
        raise ValueError("index arrays must have equal length")
    if n == 0:
        raise ValueError("need at least one pair")
    with nogil:
        for i in range(n):
            a = ix[i]
            b = iy[i]
            if a < 0 or a >= m or b < 0 or b >= m:
                code = 3
                break
            xi = z[a]
            yi = z[b]
            code = _check(xi, yi)
            if code:
                break
            if xi < u:
                xi = u
            if yi < u:
                yi = u
            r = yi / xi
            if r > m_yx:
                m_yx = r
            r = xi / yi
            if r > m_xy:
                m_xy = r
    if code == 3:
        raise IndexError("rank index out of range")
    if code:
        _raise(code)
    return m_yx, m_xy


def co_exceedance_counts(const double[::1] x, const double[::1] y, double u):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef Py_ssize_t both = 0, nx = 0, ny = 0
    cdef Py_ssize_t ex, ey
    cdef const double* xp
    cdef const double* yp
    if y.shape[0] != n:
        raise ValueError("x and y must have equal length")
    if n == 0:
        return 0, 0, 0
    xp = &x[0]
    yp = &y[0]
    with nogil:
        for i in range(n):
            # integer flags keep the loop branch-free
            ex = xp[i] > u
            ey = yp[i] > u
            nx += ex
            ny += ey
            both += ex & ey
    return both, nx, ny
