import math

import pytest

from collusion_capacity import make_all1, make_coinflip, make_interleaving, maximize_payoff
from collusion_capacity.scan import (
    GridScan,
    rows_from_csv,
    rows_to_csv,
    rows_to_json,
    sweep_c,
    threshold_grid,
    universal_sweep,
)

C = 25
KEYS = [(g, d) for g in ("coin", "int") for d in ("simple", "joint")]


@pytest.mark.parametrize("key", KEYS)
def test_grid_shape_and_range(grids25, key):
    grid = grids25[key]
    assert len(grid.cells) == C * (C + 1) // 2
    assert all(0.0 <= v <= 1.0 + 1e-12 for v in grid.cells.values())


@pytest.mark.parametrize("key", KEYS)
def test_grid_symmetry(grids25, key):
    grid = grids25[key]
    for (l, u), v in grid.cells.items():
        assert abs(v - grid[C - u, C - l]) <= 1e-9


@pytest.mark.parametrize("gap", ["coin", "int"])
def test_joint_diagonal(grids25, gap):
    grid = grids25[gap, "joint"]
    for u in range(1, C + 1):
        assert abs(grid[u - 1, u] - 1.0) <= 1e-9


@pytest.mark.parametrize("key", KEYS)
def test_corners(grids25, key):
    gap, dec = key
    grid = grids25[key]
    full = make_coinflip(C) if gap == "coin" else make_interleaving(C)
    assert abs(grid[0, C] - C * maximize_payoff(full, dec).capacity) <= 1e-9
    assert abs(grid[0, 1] - C * maximize_payoff(make_all1(C), dec).capacity) <= 1e-9
    # all-0 corner mirrors all-1
    assert abs(grid[C - 1, C] - grid[0, 1]) <= 1e-9


@pytest.mark.parametrize("gap", ["coin", "int"])
def test_simple_threshold_diagonal_drops_fast(grids25, gap):
    grid = grids25[gap, "simple"]
    diag = [grid[u - 1, u] for u in range(1, (C + 1) // 2 + 1)]
    assert all(a > b for a, b in zip(diag, diag[1:]))
    assert diag[0] - diag[1] > diag[1] - diag[-1]


@pytest.mark.xfail(strict=True, reason="cell (0,2) is a one-cell gap model, whose value "
                   "(0.42) is below the centre cell (0.47); the fast drop holds on the "
                   "diagonal cells instead")
@pytest.mark.parametrize("gap", ["coin", "int"])
def test_literal_first_row_ordering(grids25, gap):
    grid = grids25[gap, "simple"]
    assert grid[0, 1] > grid[0, 2] > grid[12, 13]


@pytest.mark.parametrize("key", KEYS)
def test_grid_round_trips(grids25, key):
    grid = grids25[key]
    text = grid.to_csv()
    assert text.splitlines()[0] == "l,u,scaled_capacity"
    assert GridScan.cells_from_csv(text) == grid.cells
    back = GridScan.from_json(grid.to_json())
    assert back.cells == grid.cells and back.options == grid.options
    assert back.to_csv() == text
    keys = [tuple(map(int, line.split(",")[:2])) for line in text.splitlines()[1:]]
    assert keys == sorted(keys)


def test_grid_independent_of_workers():
    serial = threshold_grid(6, "coin", "simple", workers=1)
    parallel = threshold_grid(6, "coin", "simple", workers=2)
    assert serial.to_csv() == parallel.to_csv()


def test_grid_rejects_tiny_c():
    with pytest.raises(ValueError):
        threshold_grid(1, "coin", "joint")


def test_sweep_examples():
    rows = sweep_c("all1", "simple", [100, 1000])
    assert rows[-1].scaled_capacity == pytest.approx(0.693, abs=0.002)
    rows = sweep_c("majority", "simple", [101, 1001])
    assert rows[-1].scaled_capacity == pytest.approx(0.459, abs=0.002)
    rows = sweep_c("interleaving", "simple", [50, 200], scaling="c2")
    assert rows[-1].scaled_capacity == pytest.approx(0.721, abs=0.002)
    assert all(r.model == "interleaving" and r.decoder == "simple" for r in rows)
    with pytest.raises(ValueError):
        sweep_c("all1", "simple", [10], scaling="c3")


def test_sweep_csv_round_trip():
    rows = sweep_c("additive:r=0.1", "joint", [10, 30], scaling="c")
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == "c,model,decoder,capacity,p_star,scaled_capacity"
    assert rows_from_csv(text) == rows
    assert sweep_c("additive:r=0.1", "joint", [10, 30], workers=2) == rows
    assert '"p_star"' in rows_to_json(rows)


def test_universal_sweep():
    rows = universal_sweep(["interleaving"], "joint", [200])
    assert rows[0].scaled_capacity == pytest.approx(1 / (2 * math.log(2)), rel=0.03)
    assert rows[0].p_star is None
    for model in ("all1", "majority", "coinflip"):
        sizes = [201, 401, 801] if model == "majority" else [200, 400, 800]
        vals = [r.scaled_capacity for r in universal_sweep([model], "simple", sizes)]
        assert max(vals) / min(vals) < 1.10
    zero = universal_sweep(["custom:0.5,0.5,0.5"], "simple", [2])
    assert zero[0].scaled_capacity == 0.0
    assert rows_from_csv(rows_to_csv(rows)) == rows
