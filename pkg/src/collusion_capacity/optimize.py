"""Capacities ``max_p I(p)``, roots of ``a(p) = 1/2`` and arcsine-averaged payoffs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ._tally_py import A
from .channels import CollusionChannel, is_deterministic, satisfies_marking
from .errors import CapacityError, MarkingRequired
from .payoff import Decoder, moments, payoff_curve

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
AUGMENT_STEPS = 32
# local maxima this far below the best sample are rounding noise, not optima
PEAK_FLOOR = 1e-6
# the payoff behaves like p log(1/p) near the ends, which limits the node
# rule to O(N^-3); 1024 nodes keep a doubling change below 1e-9 bits
DEFAULT_NODES = 1024


@dataclass(frozen=True)
class OptimizerOptions:
    grid_points: int = 1024
    refine_tolerance_p: float = 1e-10
    near_optimal_band: float = 1e-9
    small_p_augmentation: bool = True

    def __post_init__(self):
        if self.grid_points < 16:
            raise CapacityError(f"grid_points must be >= 16, got {self.grid_points}")
        if not (self.refine_tolerance_p > 0 and self.near_optimal_band > 0):
            raise CapacityError("tolerances must be positive")


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    p_star: float
    local_maxima: list = field(default_factory=list)
    evaluations: int = 0
    tolerance_used: float = 0.0
    degenerate: bool = False


def bias_grid(c: int, options: OptimizerOptions) -> np.ndarray:
    """Uniform interior grid, plus points at ``k ln2 / (4c)`` near both ends."""
    n = options.grid_points
    pts = [np.arange(1, n) / n]
    if options.small_p_augmentation:
        small = np.arange(1, AUGMENT_STEPS + 1) * math.log(2.0) / (4.0 * c)
        small = small[small < 0.5]
        pts += [small, 1.0 - small]
    return np.unique(np.concatenate(pts))


def golden_section_max(f, lo, hi, tol):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x), evaluations)``.

    The best point evaluated is returned, not the final bracket midpoint.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals = 2
    best = max((f1, -x1), (f2, -x2))
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
            cand = (f1, -x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
            cand = (f2, -x2)
        evals += 1
        best = max(best, cand)
    return -best[1], best[0], evals


def _a_minus_half(channel, p):
    # marking assumption pins the endpoints
    if p <= 0.0:
        return -0.5
    if p >= 1.0:
        return 0.5
    return float(moments(channel, [p])[0, A]) - 0.5


def _bisect_half(channel, lo, hi):
    return brentq(lambda p: _a_minus_half(channel, p), lo, hi,
                  xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)


def maximize_payoff(channel: CollusionChannel, decoder, options: OptimizerOptions = None
                    ) -> CapacityResult:
    """Global maximum of the payoff over interior biases.

    Every strict local maximum of the sampled payoff is bracketed by its grid
    neighbours and refined by golden-section search.  All refined maxima within
    ``near_optimal_band`` of the best one are reported; ``p_star`` is the
    smallest of them.  A payoff that is zero on the whole grid gives a
    degenerate result with capacity 0 at ``p = 1/2``.
    """
    options = options or OptimizerOptions()
    decoder = Decoder(decoder)
    tol = options.refine_tolerance_p
    ps = bias_grid(channel.c, options)
    vals = payoff_curve(channel, ps, decoder)
    evals = ps.size
    if not vals.max() > 0.0:
        return CapacityResult(0.0, 0.5, [(0.5, 0.0)], evals, tol, degenerate=True)

    # payoff vanishes at p -> 0, 1
    xs = np.concatenate(([0.0], ps, [1.0]))
    fs = np.concatenate(([0.0], vals, [0.0]))
    peaks = np.nonzero((fs[1:-1] > fs[:-2]) & (fs[1:-1] >= fs[2:])
                       & (fs[1:-1] >= PEAK_FLOOR * vals.max()))[0] + 1

    polish = (decoder is Decoder.JOINT and is_deterministic(channel)
              and satisfies_marking(channel))

    def f(p):
        return float(payoff_curve(channel, [p], decoder)[0])

    found = []
    for i in peaks:
        lo, hi = xs[i - 1], xs[i + 1]
        x, fx, n = golden_section_max(f, lo, hi, tol)
        evals += n
        if fs[i] > fx:
            x, fx = xs[i], fs[i]
        if polish and _a_minus_half(channel, lo) * _a_minus_half(channel, hi) < 0.0:
            # the joint payoff is h(a)/c here, so a(p) = 1/2 is the exact argmax;
            # near it the payoff is too flat for golden section to resolve p
            x = _bisect_half(channel, lo, hi)
            fx = f(x)
            evals += 1
        found.append((float(x), float(fx)))

    found.sort()
    merged = []
    for x, fx in found:
        if merged and x - merged[-1][0] <= 10 * tol:
            if fx > merged[-1][1]:
                merged[-1] = (x, fx)
        else:
            merged.append((x, fx))

    best = max(fx for _, fx in merged)
    ties = [(x, fx) for x, fx in merged if fx >= best - options.near_optimal_band]
    return CapacityResult(best, ties[0][0], ties, evals, tol)


def solve_a_half(channel: CollusionChannel, options: OptimizerOptions = None) -> list:
    """All biases with ``a(p) = 1/2``, ascending; requires the marking assumption."""
    if not satisfies_marking(channel):
        raise MarkingRequired("a(p) = 1/2 roots need theta_0 = 0 and theta_c = 1")
    options = options or OptimizerOptions()
    n = options.grid_points
    ps = np.arange(n) / n + 0.5 / n
    if options.small_p_augmentation:
        ps = np.unique(np.concatenate([ps, bias_grid(channel.c, options)]))
    xs = np.concatenate(([0.0], ps, [1.0]))
    fs = np.concatenate(([-0.5], moments(channel, ps)[:, A] - 0.5, [0.5]))
    roots = []
    for i in range(xs.size - 1):
        if fs[i] == 0.0:
            roots.append(float(xs[i]))
        elif fs[i] * fs[i + 1] < 0.0:
            roots.append(float(_bisect_half(channel, xs[i], xs[i + 1])))
    return roots


def arcsine_nodes(node_count: int) -> np.ndarray:
    """Gauss-Chebyshev nodes mapped to (0, 1); equal weights ``1/N``."""
    k = np.arange(1, node_count + 1)
    # (1 - cos x) / 2 written as sin^2(x / 2) to keep the nodes near 0 accurate
    return np.sin(np.pi * (2 * k - 1) / (4 * node_count)) ** 2


def universal_capacity(channel: CollusionChannel, decoder, node_count: int = DEFAULT_NODES
                       ) -> float:
    """Payoff averaged over the arcsine bias density ``1 / (pi sqrt(p (1 - p)))``."""
    if node_count < 8:
        raise CapacityError(f"node_count must be >= 8, got {node_count}")
    vals = payoff_curve(channel, arcsine_nodes(node_count), decoder)
    return float(math.fsum(vals) / node_count)
