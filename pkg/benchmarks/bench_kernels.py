#!/usr/bin/env python3
"""Benchmark the compiled tape kernels against the pure-numpy fallback.

Micro-benchmarks run both implementations in-process on identical inputs and
double-check bit-identical outputs; the end-to-end rows re-run the headline
certification in a subprocess with LOGCOEF_PURE_PYTHON toggled, since the
backend is selected at import time.

Usage: python benchmarks/bench_kernels.py [--boxes N] [--points N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from logcoef import _fallback
from logcoef.objective import F_POLY

try:
    from logcoef import _core
except ImportError:
    _core = None


def _random_boxes(n, rng):
    lo = rng.uniform(0, 1, (n, 4)) * [2, 2, 1, 1]
    hi = lo + rng.uniform(0, 1, (n, 4)) * ([2, 2, 1, 1] - lo)
    boxes = np.empty((n, 8))
    boxes[:, 0::2] = lo
    boxes[:, 1::2] = hi
    return boxes


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_intervals(n):
    rng = np.random.default_rng(0)
    tape = F_POLY.tape()
    boxes = _random_boxes(n, rng)
    f_lo = np.empty(n)
    f_hi = np.empty(n)
    t_py = _time(lambda: _fallback.eval_interval(tape, boxes, f_lo, f_hi))
    row = [f"interval eval ({n} boxes)", t_py, None, None]
    if _core is not None:
        c_lo = np.empty(n)
        c_hi = np.empty(n)
        t_c = _time(lambda: _core.eval_interval(tape, boxes, c_lo, c_hi))
        assert np.array_equal(f_lo, c_lo) and np.array_equal(f_hi, c_hi)
        row[2] = t_c
        row[3] = t_py / t_c
    return row


def bench_points(n):
    rng = np.random.default_rng(1)
    tape = F_POLY.tape()
    pts = np.ascontiguousarray(rng.uniform(0, 1, (n, 4)) * [2, 2, 1, 1])
    f_out = np.empty(n)
    t_py = _time(lambda: _fallback.eval_points(tape, pts, f_out))
    row = [f"point eval ({n} points)", t_py, None, None]
    if _core is not None:
        c_out = np.empty(n)
        t_c = _time(lambda: _core.eval_points(tape, pts, c_out))
        assert np.array_equal(f_out, c_out)
        row[2] = t_c
        row[3] = t_py / t_c
    return row


_E2E = (
    "import time, logcoef.certify as c; t0=time.perf_counter(); "
    "r=c.certify_global(tol=1e-6); print(time.perf_counter()-t0, r.verdict)"
)


def bench_end_to_end():
    def run(pure):
        env = dict(os.environ, LOGCOEF_PURE_PYTHON="1" if pure else "0")
        out = subprocess.run(
            [sys.executable, "-c", _E2E], env=env, capture_output=True, text=True, check=True
        )
        secs, verdict = out.stdout.split()
        assert verdict == "certified"
        return float(secs)

    t_py = run(True)
    row = ["certify 7/6 end-to-end", t_py, None, None]
    if _core is not None:
        t_c = run(False)
        row[2] = t_c
        row[3] = t_py / t_c
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--boxes", type=int, default=1 << 18)
    ap.add_argument("--points", type=int, default=1 << 21)
    args = ap.parse_args()

    rows = [bench_intervals(args.boxes), bench_points(args.points), bench_end_to_end()]
    print(f"{'benchmark':<34} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for name, t_py, t_c, ratio in rows:
        c_txt = f"{t_c:>9.4f}s" if t_c is not None else "   (n/a)"
        r_txt = f"{ratio:>8.1f}x" if ratio is not None else "     -"
        print(f"{name:<34} {t_py:>9.4f}s {c_txt} {r_txt}")
    if _core is None:
        print("compiled core not built; only the fallback was timed")


if __name__ == "__main__":
    main()
