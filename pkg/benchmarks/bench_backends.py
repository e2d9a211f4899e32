"""Compare the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_backends.py [--rows N] [--d N] [--repeats N]
"""

import argparse
import time

import numpy as np

from ddtloc import _kernels_py

try:
    from ddtloc import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=120941)
    parser.add_argument("--d", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    x = rng.standard_normal((args.rows, args.d)).astype(np.float32)
    mean = rng.standard_normal(args.d)
    w = rng.standard_normal(args.d)

    backends = [("python", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))
    else:
        print("compiled kernels not built; timing the fallback only")

    kernels = [
        ("sum_rows", lambda mod: mod.sum_rows(x)),
        ("centered_ssq", lambda mod: mod.centered_ssq(x, mean)),
        ("project", lambda mod: mod.project(x, mean, w)),
    ]
    flops = {
        "sum_rows": args.rows * args.d,
        "centered_ssq": 2.0 * args.rows * args.d * args.d,
        "project": 2.0 * args.rows * args.d,
    }

    print(f"rows={args.rows} d={args.d} repeats={args.repeats} (best of)")
    print(f"{'kernel':<14}" + "".join(f"{name:>16}" for name, _ in backends) + f"{'speedup':>10}")
    for kernel_name, call in kernels:
        times = []
        results = []
        for _, mod in backends:
            best, result = time_call(lambda mod=mod: call(mod), args.repeats)
            times.append(best)
            results.append(result)
        if len(results) == 2:
            drift = float(np.max(np.abs(results[0] - results[1])))
            scale = float(np.max(np.abs(results[0]))) or 1.0
            assert drift <= 1e-9 * scale, f"{kernel_name}: backends disagree ({drift:.3e})"
        cells = "".join(f"{t * 1000:>13.1f} ms" for t in times)
        speedup = f"{times[0] / times[-1]:>9.2f}x" if len(times) == 2 else f"{'n/a':>10}"
        rate = flops[kernel_name] / times[-1] / 1e9
        print(f"{kernel_name:<14}{cells}{speedup}  ({rate:.1f} GFLOP/s)")


if __name__ == "__main__":
    main()
