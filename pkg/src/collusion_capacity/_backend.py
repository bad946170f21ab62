"""Select the tally kernel at import time.

The compiled extension is used when it was built; otherwise the numpy
version.  Setting ``COLLUSION_CAPACITY_BACKEND=python`` forces the fallback.
"""
import os
from functools import lru_cache

import numpy as np

from . import _tally_py

BACKEND = "python"
_kernel = _tally_py.tally_moments

if os.environ.get("COLLUSION_CAPACITY_BACKEND", "").lower() != "python":
    try:
        from . import _tally
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        _kernel = _tally.tally_moments


@lru_cache(maxsize=64)
def _coeffs(c):
    lb_c = _tally_py.log_binom_coeffs(c)
    lb_m = _tally_py.log_binom_coeffs(c - 1)
    lb_c.flags.writeable = False
    lb_m.flags.writeable = False
    return lb_c, lb_m


def tally_moments(theta, ps, kernel=None):
    """Moments of ``theta`` at biases ``ps``; ``kernel`` overrides the selected backend."""
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    return (kernel or _kernel)(theta, ps, *_coeffs(theta.size - 1))
