# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tally-moment kernel; same contract as ``_tally_py.tally_moments``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, log2

cnp.import_array()

cdef double UNDERFLOW = -708.0


cdef inline double _h(double t) noexcept nogil:
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return -(t * log2(t) + (1.0 - t) * log2(1.0 - t))


cdef inline void _add(double *s, double *comp, double x) noexcept nogil:
    # Neumaier compensated summation
    cdef double t = s[0] + x
    if abs(s[0]) >= abs(x):
        comp[0] += (s[0] - t) + x
    else:
        comp[0] += (x - t) + s[0]
    s[0] = t


def tally_moments(theta, ps, lb_cs, lb_ms):
    """``lb_cs``/``lb_ms`` are the log binomial coefficients for ``c`` and ``c - 1``."""
    th = np.ascontiguousarray(theta, dtype=np.float64)
    pv = np.ascontiguousarray(np.atleast_1d(ps), dtype=np.float64)
    lb_c = np.ascontiguousarray(lb_cs, dtype=np.float64)
    lb_m = np.ascontiguousarray(lb_ms, dtype=np.float64)
    cdef Py_ssize_t c = th.shape[0] - 1
    cdef Py_ssize_t n = pv.shape[0]
    out = np.empty((n, 6), dtype=np.float64)
    hth = np.empty(c + 1, dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double[::1] ht = hth
    cdef const double[::1] t = th, lbc = lb_c, lbm = lb_m, pp = pv
    cdef Py_ssize_t i, z
    cdef double p, lp, lq, lw, w, wm
    cdef double s[8]
    cdef double k[8]
    cdef double tot, totm

    if lb_c.shape[0] != c + 1 or lb_m.shape[0] != c:
        raise ValueError("log binomial coefficient arrays do not match theta")
    for z in range(c + 1):
        ht[z] = _h(t[z])

    with nogil:
        for i in range(n):
            p = pp[i]
            lp = log(p)
            lq = log1p(-p)
            for z in range(8):
                s[z] = 0.0
                k[z] = 0.0
            for z in range(c + 1):
                # terms below the underflow limit are skipped (denormals are slow)
                lw = lbc[z] + z * lp + (c - z) * lq
                if lw > UNDERFLOW:
                    w = exp(lw)
                    _add(&s[0], &k[0], w * t[z])
                    _add(&s[1], &k[1], w * (1.0 - t[z]))
                    _add(&s[5], &k[5], w * ht[z])
                    _add(&s[6], &k[6], w)
                if z < c:
                    lw = lbm[z] + z * lp + (c - 1 - z) * lq
                    if lw > UNDERFLOW:
                        wm = exp(lw)
                        _add(&s[2], &k[2], wm * t[z])
                        _add(&s[3], &k[3], wm * t[z + 1])
                        _add(&s[4], &k[4], wm * (t[z + 1] - t[z]))
                        _add(&s[7], &k[7], wm)
            # divide out the common rounding error of the log-gamma coefficients
            tot = s[6] + k[6]
            totm = s[7] + k[7]
            o[i, 0] = (s[0] + k[0]) / tot
            o[i, 1] = (s[1] + k[1]) / tot
            o[i, 5] = (s[5] + k[5]) / tot
            o[i, 2] = (s[2] + k[2]) / totm
            o[i, 3] = (s[3] + k[3]) / totm
            o[i, 4] = (s[4] + k[4]) / totm
    return out
