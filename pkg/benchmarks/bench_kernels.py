"""Compare the compiled utility kernel with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Times one utility evaluation per profile over a 21 x 21 power grid for the
two-station example, at the coarse and the finest quadrature levels, and
reports the largest relative difference between the two backends.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from covgame import kernels
from covgame.quadrature import player_nodes
from covgame.scenario_io import default_scenario
from covgame.static_game import power_grid
from covgame.utility import DEFAULT_QUAD


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    sc = default_scenario().scenario
    grid = np.ascontiguousarray(power_grid(sc, 21))
    if kernels.compiled_utility_rows is None:
        print("compiled kernel not built; only the fallback is available")
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'level':>5} {'nodes':>7} {'profiles':>8} {'numpy s':>10} {'cython s':>10} {'speedup':>8} {'max rel diff':>13}")
    for level in (0, 2, 4):
        w, g = player_nodes(sc, 1, *DEFAULT_QUAD.level(level))
        args_ = (w, g, 0, sc.noise_power, grid)
        t_py = min(timeit.repeat(lambda: kernels.python_utility_rows(*args_), number=1, repeat=args.repeat))
        row = f"{level:>5} {len(w):>7} {len(grid):>8} {t_py:>10.4f}"
        if kernels.compiled_utility_rows is not None:
            t_c = min(timeit.repeat(lambda: kernels.compiled_utility_rows(*args_), number=1, repeat=args.repeat))
            a = kernels.python_utility_rows(*args_)
            b = kernels.compiled_utility_rows(*args_)
            diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
            row += f" {t_c:>10.4f} {t_py / t_c:>8.2f} {diff:>13.2e}"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
