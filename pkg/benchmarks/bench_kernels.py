"""Time the compiled tally kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 100,1000,10000] [--points 1100] [--repeat 5]

Reports the best wall time per call for the raw kernels and for a full
``maximize_payoff`` run with each kernel selected.
"""
import argparse
import time

import numpy as np

from collusion_capacity import _backend, _tally_py, make_all1, make_coinflip, maximize_payoff
from collusion_capacity.optimize import OptimizerOptions, bias_grid


def best_time(func, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        times.append(time.perf_counter() - t0)
    return min(times)


def with_kernel(kernel, func):
    saved = _backend._kernel
    _backend._kernel = kernel
    try:
        return func()
    finally:
        _backend._kernel = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,1000,10000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    kernels = {"numpy": _tally_py.tally_moments}
    try:
        from collusion_capacity import _tally
        kernels["cython"] = _tally.tally_moments
    except ImportError:
        print("compiled kernel not built; timing the numpy fallback only")

    print(f"{'c':>7}  {'task':<22}" + "".join(f"{k:>12}" for k in kernels) + "   speedup")
    for c in sizes:
        theta = np.asarray(make_coinflip(c).theta)
        ps = bias_grid(c, OptimizerOptions())
        rows = {
            f"moments x{ps.size}": lambda k: best_time(
                lambda: _backend.tally_moments(theta, ps, kernel=k), args.repeat),
            "maximize all1 simple": lambda k: with_kernel(k, lambda: best_time(
                lambda: maximize_payoff(make_all1(c), "simple"), max(1, args.repeat // 2))),
        }
        for task, run in rows.items():
            t = {name: run(k) for name, k in kernels.items()}
            speed = f"{t['numpy'] / t['cython']:9.1f}x" if "cython" in t else ""
            print(f"{c:>7}  {task:<22}" + "".join(f"{v * 1e3:10.2f}ms" for v in t.values())
                  + "  " + speed)


if __name__ == "__main__":
    main()
