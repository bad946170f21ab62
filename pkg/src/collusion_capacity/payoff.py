"""Mutual-information payoffs for simple and joint decoders.

For a bias ``p`` and channel ``theta`` the tally ``Z ~ Bin(c, p)`` and
``P(Y = 1 | Z = z) = theta[z]``.  The simple payoff is ``I(X_1; Y)`` and the
joint payoff is ``I(Z; Y) / c``; both are in bits.

The simple payoff is evaluated as ``p d(a1 || a) + (1 - p) d(a0 || a)``.  The
differences ``a1 - a = (1 - p) D`` and ``a0 - a = -p D`` with
``D = a1 - a0`` come straight from the kernel, and each divergence is
written as ``beta g(delta) + (1 - beta) g(eps)`` with
``g(x) = (1 + x) ln(1 + x) - x``.  Every term is non-negative so nothing
cancels, even when ``a`` is close to 0 or 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from . import _backend
from ._tally_py import A, A0, A1, ABAR, AH, DIFF
from .channels import CollusionChannel
from .errors import DomainError

LN2 = math.log(2.0)


class Decoder(str, enum.Enum):
    SIMPLE = "simple"
    JOINT = "joint"


@dataclass(frozen=True)
class MarginalTriple:
    """``a = P(Y=1)``, ``a0 = P(Y=1 | X_1=0)``, ``a1 = P(Y=1 | X_1=1)``."""

    a: float
    a0: float
    a1: float


def _check_prob(x, name):
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"{name} = {x!r} is outside [0, 1]")


def _check_bias(p):
    if not (0.0 < p < 1.0):
        raise DomainError(f"bias p = {p!r} must lie strictly inside (0, 1)")


def binary_entropy(alpha: float) -> float:
    _check_prob(alpha, "alpha")
    if alpha == 0.0 or alpha == 1.0:
        return 0.0
    return -(alpha * math.log2(alpha) + (1.0 - alpha) * math.log2(1.0 - alpha))


# coefficients of g(x) = sum_{k>=2} (-1)^k x^k / (k (k - 1))
_G_SERIES = np.array([(-1.0) ** k / (k * (k - 1)) for k in range(2, 12)])


def _g(x):
    """``(1 + x) ln(1 + x) - x`` for ``x >= -1`` (natural log), vectorized."""
    x = np.maximum(np.asarray(x, dtype=np.float64), -1.0)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-2
    xs = x[small]
    acc = np.zeros_like(xs)
    for coef in _G_SERIES[::-1]:
        acc = (acc + coef) * xs
    out[small] = acc * xs
    xl = x[~small]
    with np.errstate(divide="ignore", invalid="ignore"):
        big = (1.0 + xl) * np.log1p(xl) - xl
    out[~small] = np.where(xl == -1.0, 1.0, big)
    return out


def kl_divergence(alpha: float, beta: float) -> float:
    """Binary relative entropy ``d(alpha || beta)`` in bits.

    Returns ``inf`` when ``alpha`` puts mass where ``beta`` has none.
    """
    _check_prob(alpha, "alpha")
    _check_prob(beta, "beta")
    if alpha == beta:
        return 0.0
    if (beta == 0.0 and alpha > 0.0) or (beta == 1.0 and alpha < 1.0):
        return math.inf
    diff = alpha - beta
    total = 0.0
    if beta > 0.0:
        total += beta * float(_g(diff / beta))
    if beta < 1.0:
        total += (1.0 - beta) * float(_g(-diff / (1.0 - beta)))
    return max(total, 0.0) / LN2


def log_binomial_pmf(c: int, z: int, p: float) -> float:
    """Natural log of ``C(c, z) p^z (1 - p)^(c - z)``."""
    if not (0 <= z <= c):
        raise DomainError(f"need 0 <= z <= c, got z={z}, c={c}")
    _check_bias(p)
    return float(gammaln(c + 1.0) - gammaln(z + 1.0) - gammaln(c - z + 1.0)
                 + xlogy(z, p) + xlog1py(c - z, -p))


def moments(channel: CollusionChannel, ps) -> np.ndarray:
    """Tally moments (see ``_tally_py.tally_moments``) at each bias in ``ps``."""
    return _backend.tally_moments(np.asarray(channel.theta, dtype=np.float64),
                                  np.atleast_1d(np.asarray(ps, dtype=np.float64)))


def marginals(channel: CollusionChannel, p: float) -> MarginalTriple:
    _check_bias(p)
    m = moments(channel, [p])[0]
    clip = lambda v: min(max(float(v), 0.0), 1.0)  # noqa: E731
    return MarginalTriple(clip(m[A]), clip(m[A0]), clip(m[A1]))


def simple_from_moments(m: np.ndarray, ps) -> np.ndarray:
    ps = np.asarray(ps, dtype=np.float64)
    a = np.clip(m[:, A], 0.0, 1.0)
    abar = np.clip(m[:, ABAR], 0.0, 1.0)
    diff = m[:, DIFF]
    live = (a > 0.0) & (abar > 0.0)
    out = np.zeros(ps.shape)
    if not live.any():
        return out
    a, abar, diff, p = a[live], abar[live], diff[live], ps[live]
    up = (1.0 - p) * diff  # a1 - a
    down = -p * diff  # a0 - a
    d1 = a * _g(up / a) + abar * _g(-up / abar)
    d0 = a * _g(down / a) + abar * _g(-down / abar)
    out[live] = (p * d1 + (1.0 - p) * d0) / LN2
    return out


def joint_from_moments(m: np.ndarray, c: int) -> np.ndarray:
    a = np.clip(m[:, A], 0.0, 1.0)
    abar = np.clip(m[:, ABAR], 0.0, 1.0)
    h_out = -(xlogy(a, a) + xlogy(abar, abar)) / LN2
    return np.maximum(h_out - m[:, AH], 0.0) / c


def payoff_curve(channel: CollusionChannel, ps, decoder) -> np.ndarray:
    """Vectorized payoff over an array of interior biases."""
    ps = np.atleast_1d(np.asarray(ps, dtype=np.float64))
    m = moments(channel, ps)
    if Decoder(decoder) is Decoder.SIMPLE:
        return simple_from_moments(m, ps)
    return joint_from_moments(m, channel.c)


def simple_payoff(channel: CollusionChannel, p: float) -> float:
    """``I(X_1; Y | P = p)`` in bits."""
    _check_bias(p)
    return float(payoff_curve(channel, [p], Decoder.SIMPLE)[0])


def joint_payoff(channel: CollusionChannel, p: float) -> float:
    """``I(Z; Y | P = p) / c`` in bits."""
    _check_bias(p)
    return float(payoff_curve(channel, [p], Decoder.JOINT)[0])


def payoff(channel: CollusionChannel, p: float, decoder) -> float:
    if Decoder(decoder) is Decoder.SIMPLE:
        return simple_payoff(channel, p)
    return joint_payoff(channel, p)
