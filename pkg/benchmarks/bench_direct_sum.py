"""Time the compiled and numpy direct-sum kernels on the same inputs.

    python3 benchmarks/bench_direct_sum.py --sizes 32 48 64 --repeat 3
"""

import argparse
import time

import numpy as np

from qplatesim._direct import direct_sum_numpy

try:
    from qplatesim._core import direct_sum as direct_sum_compiled
except ImportError:
    direct_sum_compiled = None


def make_inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    hx = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    hy = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = (np.arange(n) - n // 2) * 0.7
    a = 0.5 * np.arctan2(*np.meshgrid(x, x, indexing="ij"))
    return hx, hy, x, 0.094, -0.0006, np.cos(2 * a), np.sin(2 * a)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 48, 64])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'n':>4} {'numpy [s]':>10} {'compiled [s]':>13} {'speedup':>8} {'max rel diff':>13}")
    for n in args.sizes:
        inputs = make_inputs(n)
        t_np, ref = best_of(direct_sum_numpy, inputs, args.repeat)
        if direct_sum_compiled is None:
            print(f"{n:>4} {t_np:>10.4f} {'n/a':>13}")
            continue
        t_c, out = best_of(direct_sum_compiled, inputs, args.repeat)
        diff = max(np.abs(o - r).max() for o, r in zip(out, ref)) / np.abs(ref[0]).max()
        print(f"{n:>4} {t_np:>10.4f} {t_c:>13.4f} {t_np / t_c:>8.2f} {diff:>13.2e}")


if __name__ == "__main__":
    main()
