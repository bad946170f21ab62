"""Pure numpy implementation of the tally-moment kernel.

Used when the compiled ``_tally`` extension is unavailable, and as the
reference the extension is tested against.
"""
import numpy as np
from scipy.special import gammaln

# columns of the moment array
A, ABAR, A0, A1, DIFF, AH = range(6)
N_MOMENTS = 6

_CHUNK = 1 << 21


def log_binom_coeffs(n):
    z = np.arange(n + 1, dtype=np.float64)
    return gammaln(n + 1.0) - gammaln(z + 1.0) - gammaln(n - z + 1.0)


def entropy_bits(t):
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    m = (t > 0.0) & (t < 1.0)
    tm = t[m]
    out[m] = -(tm * np.log2(tm) + (1.0 - tm) * np.log2(1.0 - tm))
    return out


def tally_moments(theta, ps, lb_c, lb_m):
    """Binomial tally sums of ``theta`` at each bias in ``ps``.

    ``lb_c`` and ``lb_m`` are ``log_binom_coeffs(c)`` and ``log_binom_coeffs(c - 1)``.

    Returns an array of shape ``(len(ps), 6)`` with columns
    ``a, 1 - a, a0, a1, a1 - a0, a_h`` where ``1 - a`` and ``a1 - a0`` are
    accumulated directly (not by subtraction).
    """
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    ps = np.atleast_1d(np.asarray(ps, dtype=np.float64))
    c = theta.size - 1
    z_c = np.arange(c + 1, dtype=np.float64)
    z_m = z_c[:-1]
    one_minus = 1.0 - theta
    step = theta[1:] - theta[:-1]
    h_theta = entropy_bits(theta)

    out = np.empty((ps.size, N_MOMENTS))
    rows = max(1, _CHUNK // (c + 1))
    for start in range(0, ps.size, rows):
        p = ps[start:start + rows, None]
        lp = np.log(p)
        lq = np.log1p(-p)
        w_c = np.exp(lb_c + z_c * lp + (c - z_c) * lq)
        w_m = np.exp(lb_m + z_m * lp + (c - 1 - z_m) * lq)
        # normalizing cancels the common rounding error of the log-gamma coefficients
        tot = w_c.sum(axis=1)
        tot_m = w_m.sum(axis=1)
        blk = out[start:start + rows]
        blk[:, A] = (w_c @ theta) / tot
        blk[:, ABAR] = (w_c @ one_minus) / tot
        blk[:, A0] = (w_m @ theta[:-1]) / tot_m
        blk[:, A1] = (w_m @ theta[1:]) / tot_m
        blk[:, DIFF] = (w_m @ step) / tot_m
        blk[:, AH] = (w_c @ h_theta) / tot
    return out
