"""Compare the compiled kernel extension against the pure-Python fallback.

The success-probability kernel is the hot path: the equal-level solver calls
it ~1e5 times per plan table inside nested bisections.  This script times the
scalar kernels directly and then a full table build under each backend.

Usage: python benchmarks/bench_kernels.py [--calls N] [--skip-table]
"""

import argparse
import os
import subprocess
import sys
import time

from cmqsearch import _kernels_py

try:
    from cmqsearch import _kernels
except ImportError:
    _kernels = None


def time_kernel(mod, fn_name, calls):
    fn = getattr(mod, fn_name)
    lams = [0.01 + 0.98 * i / calls for i in range(calls)]
    t0 = time.perf_counter()
    acc = 0.0
    for lam in lams:
        acc += fn(5, 2.243, lam)
    dt = time.perf_counter() - t0
    return dt, acc


def time_table_build(pure):
    env = dict(os.environ, CMQSEARCH_PURE="1" if pure else "")
    code = ("import time; t0=time.perf_counter(); "
            "from cmqsearch.planner import build_table; build_table(0.90, 1e-2); "
            "print(time.perf_counter()-t0)")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--calls", type=int, default=1_000_000)
    ap.add_argument("--skip-table", action="store_true")
    args = ap.parse_args()

    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return 1

    for fn in ("p_success", "p_derivative"):
        t_py, acc_py = time_kernel(_kernels_py, fn, args.calls)
        t_cy, acc_cy = time_kernel(_kernels, fn, args.calls)
        assert abs(acc_py - acc_cy) < 1e-6 * max(1.0, abs(acc_py))
        print(f"{fn:14s} x {args.calls}: python {t_py:.3f}s  "
              f"compiled {t_cy:.3f}s  speedup {t_py / t_cy:.1f}x")

    if not args.skip_table:
        t_py = time_table_build(pure=True)
        t_cy = time_table_build(pure=False)
        print(f"{'table build':14s} (p_cri=0.90, lambda0=1e-2): "
              f"python {t_py:.3f}s  compiled {t_cy:.3f}s  speedup {t_py / t_cy:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
