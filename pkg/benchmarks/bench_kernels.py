"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--csv out.csv]

The first numba call compiles (or loads the cache) and is excluded.
Also times one network evaluation at M = 3 with each backend.
"""

import argparse
import csv
import sys
import time

import numpy as np

from cvnn_approx import _kernels
from cvnn_approx.activations import exp_re
from cvnn_approx.core import default_grid
from cvnn_approx.synthesis import synthesize
from cvnn_approx.targets import gauss


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(rng):
    values = rng.standard_normal((4000, 441)) + 1j * rng.standard_normal((4000, 441))
    weights = rng.standard_normal(441) + 1j * rng.standard_normal(441)
    yield "weighted_rowsum 4000x441", (values, weights), "weighted_rowsum"
    block = rng.standard_normal((64 * 64 * 64, 64))
    matrix = rng.standard_normal((12, 64))
    yield "contract_last 262144x64 -> 12", (block, matrix), "contract_last"
    yield "chebyshev_table 1e6 x deg 11", (rng.uniform(-1, 1, 1_000_000), 11), "chebyshev_table"


def main(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--csv", default=None)
    args = parser.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or CVNN_DISABLE_JIT set); nothing to compare", file=sys.stderr)
        return 1

    rng = np.random.default_rng(0)
    rows = []
    for label, inputs, name in cases(rng):
        fast = getattr(_kernels, name + "_numba")
        slow = getattr(_kernels, name + "_numpy")
        fast(*inputs)  # compile
        diff = np.abs(np.asarray(fast(*inputs)) - np.asarray(slow(*inputs))).max()
        t_numba = best_of(lambda: fast(*inputs), args.repeat)
        t_numpy = best_of(lambda: slow(*inputs), args.repeat)
        rows.append((label, t_numpy, t_numba, t_numpy / t_numba, diff))

    net, _ = synthesize(exp_re(), gauss, 1, 2, 1681)
    z = default_grid(1).nodes()
    original = _kernels.weighted_rowsum
    timings = {}
    for backend in ("numpy", "numba"):
        # the network looks the kernel up on the module at call time
        _kernels.weighted_rowsum = getattr(_kernels, "weighted_rowsum_" + backend)
        net(z)
        timings[backend] = best_of(lambda: net(z), args.repeat)
    _kernels.weighted_rowsum = original
    rows.append(("network eval M=3, 1089 nodes", timings["numpy"], timings["numba"], timings["numpy"] / timings["numba"], 0.0))

    header = ("case", "numpy_s", "numba_s", "speedup", "max_abs_diff")
    print(f"{header[0]:<34} {header[1]:>10} {header[2]:>10} {header[3]:>8} {header[4]:>12}")
    for label, a, b, sp, d in rows:
        print(f"{label:<34} {a:10.4f} {b:10.4f} {sp:8.1f} {d:12.2e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
