"""Backend selection and worker dispatch for the tape kernels.

The compiled core is used when available; set LOGCOEF_PURE_PYTHON=1 to force
the numpy fallback (the benchmark does this to compare the two).  Work is
split into contiguous slices written into preallocated output arrays, so the
result is bit-identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._expr import Tape

if os.environ.get("LOGCOEF_PURE_PYTHON", "0") not in ("", "0"):
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built; the fallback is feature-complete
        from . import _fallback as _impl


def backend_name() -> str:
    return _impl.BACKEND_NAME


def _slices(n: int, workers: int):
    workers = max(1, min(workers, n))
    step = (n + workers - 1) // workers
    return [(s, min(s + step, n)) for s in range(0, n, step)]


def eval_interval(tape: Tape, boxes: np.ndarray, workers: int = 1):
    """Enclosure [lo_i, hi_i] of the tape polynomial over each box row."""
    boxes = np.ascontiguousarray(boxes, dtype=np.float64)
    n = boxes.shape[0]
    lo = np.empty(n)
    hi = np.empty(n)
    if n == 0:
        return lo, hi
    if workers <= 1 or n < 4096:
        _impl.eval_interval(tape, boxes, lo, hi)
        return lo, hi
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_impl.eval_interval, tape, boxes[a:b], lo[a:b], hi[a:b])
            for a, b in _slices(n, workers)
        ]
        for f in futures:
            f.result()
    return lo, hi


def eval_points(tape: Tape, points: np.ndarray, workers: int = 1):
    """Ordinary float evaluation of the tape polynomial at each point row."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    out = np.empty(n)
    if n == 0:
        return out
    if workers <= 1 or n < 4096:
        _impl.eval_points(tape, points, out)
        return out
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_impl.eval_points, tape, points[a:b], out[a:b])
            for a, b in _slices(n, workers)
        ]
        for f in futures:
            f.result()
    return out
