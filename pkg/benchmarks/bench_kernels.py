"""Micro-benchmark: numba-jitted kernels vs their pure-numpy fallbacks.

Usage:  python3 benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels on representative inputs and prints the
speedup of the jitted path.  Runs the numpy path alone when numba is not
installed.
"""

import argparse
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from aggsep import _kernels


def _time(fn, args, repeat):
    fn(*args)  # warm up (and trigger JIT compilation)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)

    g_args = (rng.uniform(-10, 10, size=200_000), 0.37)

    q = 6
    box_args = (
        np.ascontiguousarray(rng.uniform(-5, 5, size=q)),
        np.full(q, 5, dtype=np.int64),
        3.7,
        np.ascontiguousarray(rng.uniform(-5, 5, size=q)),
        2.0,
        1.5,
    )

    m = 2000
    ratio_args = (
        rng.uniform(-2, 2, size=m),
        rng.uniform(0, 3, size=m),
        np.zeros(m),
        np.where(rng.random(m) < 0.5, rng.uniform(3, 6, size=m), np.inf),
        1.0,
        np.inf,
    )

    cases = [
        ("g_values (200k)", _kernels.g_values_np, "g_values_nb", g_args),
        ("max_box_violation (6^6 box)", _kernels.max_box_violation_np,
         "max_box_violation_nb", box_args),
        ("ratio_test (m=2000)", _kernels.ratio_test_np, "ratio_test_nb",
         ratio_args),
    ]

    print("numba available: %s (active path: %s)" % (
        _kernels.HAVE_NUMBA, "numba" if _kernels.USING_NUMBA else "numpy"))
    print("%-30s %12s %12s %9s" % ("kernel", "numpy [ms]", "numba [ms]", "speedup"))
    for label, np_fn, nb_name, fn_args in cases:
        t_np = _time(np_fn, fn_args, args.repeat)
        if _kernels.HAVE_NUMBA:
            nb_fn = getattr(_kernels, nb_name)
            t_nb = _time(nb_fn, fn_args, args.repeat)
            print("%-30s %12.3f %12.3f %8.1fx" % (
                label, t_np * 1e3, t_nb * 1e3, t_np / t_nb))
        else:
            print("%-30s %12.3f %12s %9s" % (label, t_np * 1e3, "-", "-"))


if __name__ == "__main__":
    main()
