"""Leading-order capacity predictions and convergence reports.

Predictions are the closed forms for large ``c``; the additive and dilution
models also carry their first-order correction in the noise rate ``r``
(``order="first"``, the default).  ``order="leading"`` drops it.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, fields

from scipy.special import xlogy

from .channels import ChannelSpec, parse_spec
from .errors import DegenerateCapacity, DomainError, Unavailable
from .optimize import OptimizerOptions, maximize_payoff
from .payoff import Decoder, binary_entropy

LN2 = math.log(2.0)
ORDERS = ("leading", "first")


def as_model(model) -> ChannelSpec:
    spec = parse_spec(model) if isinstance(model, str) else model
    if spec.kind not in ("interleaving", "all1", "majority", "minority", "coinflip",
                         "additive", "dilution", "threshold"):
        raise Unavailable(f"no closed-form asymptotics for '{spec}'")
    if spec.kind in ("additive", "dilution") and not (0.0 <= spec.r < 1.0):
        raise DomainError(f"noise rate must satisfy 0 <= r < 1, got {spec.r!r}")
    if spec.kind == "threshold" and spec.u < 1:
        raise DomainError(f"threshold needs u >= 1, got {spec.u}")
    return spec


def _check_order(order):
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")


def predicted_capacity(model, decoder, c: int, order: str = "first") -> float:
    """Leading-order capacity in bits for ``c`` colluders."""
    m = as_model(model)
    decoder = Decoder(decoder)
    _check_order(order)
    first = order == "first"
    k = m.kind
    if k == "interleaving":
        return 1.0 / (2.0 * c * c * LN2)
    if decoder is Decoder.JOINT:
        if k == "coinflip":
            return math.log2(5.0 / 4.0) / c
        if k == "additive" and first:
            return (1.0 - 0.5 * binary_entropy(m.r)) / c
        if k == "dilution" and first:
            return (1.0 - 0.5 * LN2 * binary_entropy(m.r)) / c
        # every remaining model is deterministic with the marking assumption
        # at r = 0, so the joint capacity is exactly 1/c
        return 1.0 / c
    if k in ("all1", "minority"):
        return LN2 / c
    if k == "majority":
        return 1.0 / (math.pi * c * LN2)
    if k == "coinflip":
        return LN2 / (4.0 * c)
    if k == "additive":
        return (LN2 - (m.r if first else 0.0)) / c
    if k == "dilution":
        if not first:
            return LN2 / c
        r = m.r
        return LN2 / c * (1.0 + xlogy(r, r) / (2 * LN2) - r * (1 - LN2) / (2 * LN2))
    raise Unavailable("the simple capacity of threshold group testing has no closed form")


def predicted_optimal_p(model, decoder, c: int, order: str = "first") -> float:
    """Leading-order maximizing bias (exact for the all-1 joint case)."""
    m = as_model(model)
    decoder = Decoder(decoder)
    _check_order(order)
    first = order == "first"
    k = m.kind
    simple = decoder is Decoder.SIMPLE
    if k == "interleaving":
        if simple:
            return 0.5
        raise Unavailable("the interleaving attack equalizes the joint payoff; no unique optimum")
    if k == "majority":
        return 0.5
    if k == "all1":
        return LN2 / c if simple else 1.0 - 2.0 ** (-1.0 / c)
    if k == "minority":
        return LN2 / c if simple else 0.5
    if k == "coinflip":
        return LN2 / (2.0 * c) if simple else math.log(5.0 / 3.0) / c
    if k == "threshold":
        if simple:
            raise Unavailable("the simple capacity of threshold group testing has no closed form")
        return (m.u - 1.0 / 3.0) / c
    r = m.r if first else 0.0
    if k == "additive":
        if simple:
            return LN2 / c * (1.0 + r * (2 * LN2 - 1) / (2 * LN2 * (1 - LN2)))
        return LN2 / c * (1.0 - (r + xlogy(r, r)) / (2 * LN2))
    # dilution
    if simple:
        return LN2 / c * (1.0 + xlogy(r, r) / (4 * LN2)
                          + r * (-3 * LN2 ** 2 + 5 * LN2 - 1) / (4 * LN2 * (1 - LN2)))
    return LN2 / c * (1.0 + r - (1 - LN2) / 2 * binary_entropy(r))


def code_length_bound(capacity: float, population: int) -> float:
    """Tests/segments needed to single out the guilty set among ``population`` users."""
    if not capacity > 0.0:
        raise DegenerateCapacity(f"capacity must be positive, got {capacity!r}")
    if population < 2:
        raise DomainError(f"population must be at least 2, got {population}")
    return math.log2(population) / capacity


def residual_power(model) -> int:
    return 2 if as_model(model).kind == "interleaving" else 1


@dataclass(frozen=True)
class ConvergenceRow:
    c: int
    numeric_C: float
    predicted_C: float
    scaled_residual: float
    c_p_numeric: float
    c_p_predicted: float  # nan when no prediction exists


CSV_HEADER = [f.name for f in fields(ConvergenceRow)]


def convergence_report(model, decoder, c_values, options: OptimizerOptions = None,
                       order: str = "first") -> list:
    """Numeric optimum against the prediction for each ``c``."""
    m = as_model(model)
    power = residual_power(m)
    rows = []
    for c in c_values:
        result = maximize_payoff(m.build(c), decoder, options)
        predicted = predicted_capacity(m, decoder, c, order)
        try:
            cp_pred = c * predicted_optimal_p(m, decoder, c, order)
        except Unavailable:
            cp_pred = math.nan
        rows.append(ConvergenceRow(
            c=c,
            numeric_C=result.capacity,
            predicted_C=predicted,
            scaled_residual=abs(result.capacity - predicted) * c ** power,
            c_p_numeric=c * result.p_star,
            c_p_predicted=cp_pred,
        ))
    return rows


def report_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        c, *rest = astuple(row)
        w.writerow([c] + [repr(v) for v in rest])
    return buf.getvalue()
