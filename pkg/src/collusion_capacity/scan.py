"""Batch experiments: threshold (l, u) grids, c-sweeps and universal-encoding sweeps.

Cells and rows are independent, so they may be computed by a process pool
(``PARALLELISM`` environment variable, default 1).  Output order is fixed
and does not depend on the number of workers.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .channels import GapKind, make_threshold_gap, parse_spec
from .optimize import DEFAULT_NODES, OptimizerOptions, maximize_payoff, universal_capacity
from .payoff import Decoder

SCALINGS = {"c": 1.0, "c2": 2.0, "c32": 1.5}


def default_workers():
    value = os.environ.get("PARALLELISM", "").strip()
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _map(func, items, workers):
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * workers))))


@dataclass
class GridScan:
    """Scaled capacities ``c * C`` of the threshold-gap models over ``0 <= l < u <= c``."""

    c: int
    decoder: Decoder
    gap: GapKind
    cells: dict = field(default_factory=dict)
    options: OptimizerOptions = field(default_factory=OptimizerOptions)

    def __getitem__(self, lu):
        return self.cells[lu]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["l", "u", "scaled_capacity"])
        for (l, u), v in sorted(self.cells.items()):
            w.writerow([l, u, repr(v)])
        return buf.getvalue()

    @staticmethod
    def cells_from_csv(text) -> dict:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != ["l", "u", "scaled_capacity"]:
            raise ValueError(f"unexpected grid CSV header {reader.fieldnames}")
        return {(int(r["l"]), int(r["u"])): float(r["scaled_capacity"]) for r in reader}

    @classmethod
    def from_csv(cls, text, c, decoder, gap, options=None):
        return cls(c, Decoder(decoder), GapKind(gap), cls.cells_from_csv(text),
                   options or OptimizerOptions())

    def to_json(self) -> str:
        return json.dumps({
            "c": self.c,
            "decoder": self.decoder.value,
            "gap": self.gap.value,
            "options": asdict(self.options),
            "cells": [{"l": l, "u": u, "scaled_capacity": v}
                      for (l, u), v in sorted(self.cells.items())],
        }, indent=2)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        cells = {(e["l"], e["u"]): e["scaled_capacity"] for e in d["cells"]}
        return cls(d["c"], Decoder(d["decoder"]), GapKind(d["gap"]), cells,
                   OptimizerOptions(**d["options"]))


def _grid_cell(args):
    c, l, u, gap, decoder, options = args
    result = maximize_payoff(make_threshold_gap(c, l, u, gap), decoder, options)
    return c * result.capacity


def threshold_grid(c: int, gap_kind, decoder, options: OptimizerOptions = None,
                   workers: int = None) -> GridScan:
    if c < 2:
        raise ValueError(f"threshold grids need c >= 2, got {c}")
    gap_kind, decoder = GapKind(gap_kind), Decoder(decoder)
    options = options or OptimizerOptions()
    keys = [(l, u) for l in range(c) for u in range(l + 1, c + 1)]
    values = _map(_grid_cell, [(c, l, u, gap_kind, decoder, options) for l, u in keys],
                  workers)
    return GridScan(c, decoder, gap_kind, dict(zip(keys, values)), options)


@dataclass(frozen=True)
class SweepRow:
    c: int
    model: str
    decoder: str
    capacity: float
    p_star: float  # None for universal-encoding rows (no bias is optimized)
    scaled_capacity: float


SWEEP_HEADER = ["c", "model", "decoder", "capacity", "p_star", "scaled_capacity"]


def _sweep_row(args):
    model, decoder, c, power, options = args
    result = maximize_payoff(parse_spec(model).build(c), decoder, options)
    return SweepRow(c, model, decoder, result.capacity, result.p_star,
                    result.capacity * c ** power)


def sweep_c(model, decoder, c_values, scaling: str = "c", options: OptimizerOptions = None,
            workers: int = None) -> list:
    """Capacity and optimal bias over ``c``, scaled by ``c``, ``c^2`` or ``c^(3/2)``."""
    if scaling not in SCALINGS:
        raise ValueError(f"scaling must be one of {sorted(SCALINGS)}, got {scaling!r}")
    model = str(parse_spec(model) if isinstance(model, str) else model)
    decoder = Decoder(decoder).value
    options = options or OptimizerOptions()
    jobs = [(model, decoder, c, SCALINGS[scaling], options) for c in c_values]
    return _map(_sweep_row, jobs, workers)


def _universal_row(args):
    model, decoder, c, node_count = args
    spec = parse_spec(model)
    value = universal_capacity(spec.build(c), decoder, node_count)
    # the interleaving attack is the one model whose universal capacity goes as c^-2
    power = 2.0 if spec.kind == "interleaving" else 1.5
    return SweepRow(c, model, decoder, value, None, value * c ** power)


def universal_sweep(models, decoder, c_values, node_count: int = None,
                    workers: int = None) -> list:
    """Arcsine-averaged payoffs, scaled by ``c^(3/2)`` (``c^2`` for interleaving)."""
    node_count = node_count or DEFAULT_NODES
    decoder = Decoder(decoder).value
    jobs = [(str(parse_spec(m) if isinstance(m, str) else m), decoder, c, node_count)
            for m in models for c in c_values]
    return _map(_universal_row, jobs, workers)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([r.c, r.model, r.decoder, repr(r.capacity),
                    "" if r.p_star is None else repr(r.p_star), repr(r.scaled_capacity)])
    return buf.getvalue()


def rows_from_csv(text) -> list:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != SWEEP_HEADER:
        raise ValueError(f"unexpected sweep CSV header {reader.fieldnames}")
    return [SweepRow(int(r["c"]), r["model"], r["decoder"], float(r["capacity"]),
                     float(r["p_star"]) if r["p_star"] else None,
                     float(r["scaled_capacity"])) for r in reader]


def rows_to_json(rows) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2)
