"""Collusion channels and group-testing models.

A channel is the vector ``theta`` of length ``c + 1`` where ``theta[z]`` is the
probability that the output symbol (pirate symbol or test result) is 1 when
``z`` of the ``c`` colluders/defectives hold a 1.

Channels can also be described by short spec strings, used by the CLI::

    interleaving | all1 | majority | minority | coinflip
    additive:r=<float> | dilution:r=<float> | threshold:u=<int>
    thresholdgap:l=<int>,u=<int>,gap=<coin|int>
    custom:<comma-separated floats>
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    BadProbability,
    BadRate,
    BadThreshold,
    ChannelError,
    ChannelSpecError,
    EvenCoalition,
)


class GapKind(str, enum.Enum):
    COIN = "coin"
    INTERLEAVING = "int"


@dataclass(frozen=True)
class CollusionChannel:
    """Output-1 probabilities indexed by the tally ``z = 0..c``.

    ``label`` is the spec string the channel was built from (if any); it does
    not take part in equality.
    """

    theta: tuple
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        if len(theta) < 2:
            raise BadProbability(f"theta needs at least 2 entries, got {len(theta)}")
        for z, t in enumerate(theta):
            if not (0.0 <= t <= 1.0):
                raise BadProbability(f"theta[{z}] = {t!r} is not a probability")
        object.__setattr__(self, "theta", theta)

    @property
    def c(self) -> int:
        return len(self.theta) - 1

    def __len__(self):
        return len(self.theta)


def _check_c(c):
    if isinstance(c, bool) or not isinstance(c, int) or c < 1:
        raise ChannelError(f"coalition size must be a positive integer, got {c!r}")


def _check_rate(r):
    if not (0.0 <= r < 1.0):
        raise BadRate(f"noise rate must satisfy 0 <= r < 1, got {r!r}")


def make_interleaving(c: int) -> CollusionChannel:
    _check_c(c)
    return CollusionChannel(tuple(z / c for z in range(c + 1)), label="interleaving")


def make_all1(c: int) -> CollusionChannel:
    _check_c(c)
    return CollusionChannel((0.0,) + (1.0,) * c, label="all1")


def make_majority(c: int) -> CollusionChannel:
    _check_c(c)
    if c % 2 == 0:
        raise EvenCoalition(f"majority voting needs an odd coalition size, got c={c}")
    return CollusionChannel(tuple(1.0 if 2 * z > c else 0.0 for z in range(c + 1)),
                            label="majority")


def make_minority(c: int) -> CollusionChannel:
    _check_c(c)
    if c % 2 == 0:
        raise EvenCoalition(f"minority voting needs an odd coalition size, got c={c}")
    theta = tuple(1.0 if (z == c or 0 < 2 * z < c) else 0.0 for z in range(c + 1))
    return CollusionChannel(theta, label="minority")


def make_coinflip(c: int) -> CollusionChannel:
    _check_c(c)
    theta = [0.5] * (c + 1)
    theta[0], theta[c] = 0.0, 1.0
    return CollusionChannel(tuple(theta), label="coinflip")


def make_additive(c: int, r: float) -> CollusionChannel:
    _check_c(c)
    _check_rate(r)
    return CollusionChannel((float(r),) + (1.0,) * c, label=f"additive:r={float(r)!r}")


def make_dilution(c: int, r: float) -> CollusionChannel:
    _check_c(c)
    _check_rate(r)
    r = float(r)
    return CollusionChannel(tuple(1.0 - r ** z for z in range(c + 1)),
                            label=f"dilution:r={r!r}")


def make_threshold(c: int, u: int) -> CollusionChannel:
    _check_c(c)
    if not (1 <= u <= c):
        raise BadThreshold(f"threshold needs 1 <= u <= c, got u={u}, c={c}")
    return CollusionChannel(tuple(1.0 if z >= u else 0.0 for z in range(c + 1)),
                            label=f"threshold:u={u}")


def make_threshold_gap(c: int, l: int, u: int, gap_kind) -> CollusionChannel:
    _check_c(c)
    if not (0 <= l < u <= c):
        raise BadThreshold(f"threshold gap needs 0 <= l < u <= c, got l={l}, u={u}, c={c}")
    gap_kind = GapKind(gap_kind)
    theta = []
    for z in range(c + 1):
        if z <= l:
            theta.append(0.0)
        elif z >= u:
            theta.append(1.0)
        elif gap_kind is GapKind.COIN:
            theta.append(0.5)
        else:
            theta.append((z - l) / (u - l))
    return CollusionChannel(tuple(theta),
                            label=f"thresholdgap:l={l},u={u},gap={gap_kind.value}")


def make_custom(theta: Sequence[float]) -> CollusionChannel:
    theta = tuple(float(t) for t in theta)
    ch = CollusionChannel(theta)
    return CollusionChannel(ch.theta, label=format_custom(ch.theta))


def format_custom(theta) -> str:
    return "custom:" + ",".join(repr(float(t)) for t in theta)


def satisfies_marking(channel: CollusionChannel) -> bool:
    return channel.theta[0] == 0.0 and channel.theta[-1] == 1.0


def is_deterministic(channel: CollusionChannel) -> bool:
    return all(t == 0.0 or t == 1.0 for t in channel.theta)


def is_symbol_symmetric(channel: CollusionChannel) -> bool:
    # exact test written as a sum: z/c + (c - z)/c rounds to 1, while
    # 1 - (c - z)/c need not equal z/c in floating point
    th = channel.theta
    return all(th[z] + th[-1 - z] == 1.0 for z in range(len(th)))


# -- spec strings -----------------------------------------------------------

_SIMPLE = {
    "interleaving": make_interleaving,
    "all1": make_all1,
    "majority": make_majority,
    "minority": make_minority,
    "coinflip": make_coinflip,
}

# model kinds with closed-form asymptotics (everything except the gap models)
MODEL_KINDS = ("interleaving", "all1", "majority", "minority", "coinflip",
               "additive", "dilution", "threshold")


@dataclass(frozen=True)
class ChannelSpec:
    """Parsed channel spec string: a model kind plus its parameters.

    ``r`` is the noise rate, ``l``/``u`` the thresholds, ``gap`` the gap kind;
    ``theta`` is only used by ``custom``.
    """

    kind: str
    r: Optional[float] = None
    l: Optional[int] = None
    u: Optional[int] = None
    gap: Optional[GapKind] = None
    theta: Optional[tuple] = None

    def build(self, c: Optional[int] = None) -> CollusionChannel:
        if self.kind == "custom":
            ch = make_custom(self.theta)
            if c is not None and c != ch.c:
                raise ChannelSpecError(
                    f"custom channel has c={ch.c} but c={c} was requested", token=str(c))
            return ch
        if c is None:
            raise ChannelSpecError(f"channel '{self}' needs a coalition size c", token=str(self))
        if self.kind in _SIMPLE:
            return _SIMPLE[self.kind](c)
        if self.kind == "additive":
            return make_additive(c, self.r)
        if self.kind == "dilution":
            return make_dilution(c, self.r)
        if self.kind == "threshold":
            return make_threshold(c, self.u)
        return make_threshold_gap(c, self.l, self.u, self.gap)

    def __str__(self):
        if self.kind in _SIMPLE:
            return self.kind
        if self.kind in ("additive", "dilution"):
            return f"{self.kind}:r={self.r!r}"
        if self.kind == "threshold":
            return f"threshold:u={self.u}"
        if self.kind == "thresholdgap":
            return f"thresholdgap:l={self.l},u={self.u},gap={self.gap.value}"
        return format_custom(self.theta)


def _parse_params(body, allowed, spec):
    params = {}
    for item in body.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise ChannelSpecError(f"bad parameter '{item}' in channel spec '{spec}'", token=item)
        if key in params:
            raise ChannelSpecError(f"duplicate parameter '{key}' in '{spec}'", token=item)
        params[key] = value.strip()
    missing = [k for k in allowed if k not in params]
    if missing:
        raise ChannelSpecError(f"channel spec '{spec}' is missing {', '.join(missing)}",
                               token=spec)
    return params


def _to_number(conv, text, spec):
    try:
        value = conv(text)
    except ValueError:
        raise ChannelSpecError(f"cannot parse '{text}' in channel spec '{spec}'", token=text)
    if conv is float and not math.isfinite(value):
        raise ChannelSpecError(f"non-finite value '{text}' in '{spec}'", token=text)
    return value


def parse_spec(spec: str) -> ChannelSpec:
    text = spec.strip()
    kind, _, body = text.partition(":")
    kind = kind.strip()
    if kind in _SIMPLE:
        if body:
            raise ChannelSpecError(f"'{kind}' takes no parameters", token=body)
        return ChannelSpec(kind)
    if kind in ("additive", "dilution"):
        p = _parse_params(body, ("r",), spec)
        return ChannelSpec(kind, r=_to_number(float, p["r"], spec))
    if kind == "threshold":
        p = _parse_params(body, ("u",), spec)
        return ChannelSpec(kind, u=_to_number(int, p["u"], spec))
    if kind == "thresholdgap":
        p = _parse_params(body, ("l", "u", "gap"), spec)
        try:
            gap = GapKind(p["gap"])
        except ValueError:
            raise ChannelSpecError(f"gap must be 'coin' or 'int', got '{p['gap']}'",
                                   token=p["gap"])
        return ChannelSpec(kind, l=_to_number(int, p["l"], spec),
                           u=_to_number(int, p["u"], spec), gap=gap)
    if kind == "custom":
        if not body:
            raise ChannelSpecError("custom channel needs comma-separated values", token=spec)
        values = tuple(_to_number(float, v, spec) for v in body.split(","))
        return ChannelSpec(kind, theta=values)
    raise ChannelSpecError(f"unknown channel kind '{kind}'", token=kind)


def parse_channel(spec: str, c: Optional[int] = None) -> CollusionChannel:
    """Build a channel from a spec string; ``c`` is required except for ``custom``."""
    return parse_spec(spec).build(c)


def format_channel(channel: CollusionChannel) -> str:
    """Spec string for ``channel``; ``parse_channel(format_channel(ch), ch.c) == ch``."""
    if channel.label is not None:
        return channel.label
    return format_custom(channel.theta)
