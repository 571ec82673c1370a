"""Pure-numpy tape interpreters: the fallback when the compiled core is absent.

Directed rounding is emulated with error-free transforms: TwoSum residuals
for +/- and Dekker-split residuals for products tell in which direction the
rounded result missed the exact one, and a single nextafter step lands on the
correctly rounded-down / rounded-up value.  No rounding-mode control, no fma;
the compiled core runs the identical sequence of IEEE operations, so both
backends produce bit-identical enclosures.
"""

from __future__ import annotations

import numpy as np

from ._expr import OP_ADD, OP_CONST, OP_LOAD, OP_MUL, OP_NEG, OP_SQR, OP_SUB, Tape

BACKEND_NAME = "python"

_NEG_INF = np.float64(-np.inf)
_POS_INF = np.float64(np.inf)
_SPLITTER = np.float64(134217729.0)  # 2**27 + 1

_CHUNK = 1 << 17


def _two_sum_err(a, b, s):
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLITTER * a
    h = t - (t - a)
    return h, a - h


def _prod_err(a, b, p, ah, al, bh, bl):
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _down(s, e):
    return np.where(e < 0, np.nextafter(s, _NEG_INF), s)


def _up(s, e):
    return np.where(e > 0, np.nextafter(s, _POS_INF), s)


def _add_down(a, b):
    s = a + b
    return _down(s, _two_sum_err(a, b, s))


def _add_up(a, b):
    s = a + b
    return _up(s, _two_sum_err(a, b, s))


def _mul_corners(alo, ahi, blo, bhi):
    """Rounded-down minimum and rounded-up maximum of the corner products."""
    ah1, al1 = _split(alo)
    ah2, al2 = _split(ahi)
    bh1, bl1 = _split(blo)
    bh2, bl2 = _split(bhi)
    lo = None
    hi = None
    for (a, ah, al), (b, bh, bl) in (
        ((alo, ah1, al1), (blo, bh1, bl1)),
        ((alo, ah1, al1), (bhi, bh2, bl2)),
        ((ahi, ah2, al2), (blo, bh1, bl1)),
        ((ahi, ah2, al2), (bhi, bh2, bl2)),
    ):
        p = a * b
        e = _prod_err(a, b, p, ah, al, bh, bl)
        d = _down(p, e)
        u = _up(p, e)
        lo = d if lo is None else np.minimum(lo, d)
        hi = u if hi is None else np.maximum(hi, u)
    return lo, hi


def _sqr(alo, ahi):
    ah1, al1 = _split(alo)
    ah2, al2 = _split(ahi)
    p1 = alo * alo
    e1 = _prod_err(alo, alo, p1, ah1, al1, ah1, al1)
    p2 = ahi * ahi
    e2 = _prod_err(ahi, ahi, p2, ah2, al2, ah2, al2)
    lo_pos = _down(p1, e1)  # if 0 <= alo
    lo_neg = _down(p2, e2)  # if ahi <= 0
    hi = np.maximum(_up(p1, e1), _up(p2, e2))
    lo = np.where(alo >= 0, lo_pos, np.where(ahi <= 0, lo_neg, 0.0))
    return lo, hi


def _interval_chunk(tape: Tape, boxes, out_lo, out_hi):
    n = boxes.shape[0]
    rlo = [None] * tape.nregs
    rhi = [None] * tape.nregs
    consts = tape.consts
    for op, dst, a, b in tape.codes:
        if op == OP_LOAD:
            rlo[dst] = boxes[:, 2 * a].copy()
            rhi[dst] = boxes[:, 2 * a + 1].copy()
        elif op == OP_CONST:
            rlo[dst] = np.full(n, consts[a])
            rhi[dst] = rlo[dst]
        elif op == OP_ADD:
            lo = _add_down(rlo[a], rlo[b])
            hi = _add_up(rhi[a], rhi[b])
            rlo[dst], rhi[dst] = lo, hi
        elif op == OP_SUB:
            lo = _add_down(rlo[a], -rhi[b])
            hi = _add_up(rhi[a], -rlo[b])
            rlo[dst], rhi[dst] = lo, hi
        elif op == OP_MUL:
            rlo[dst], rhi[dst] = _mul_corners(rlo[a], rhi[a], rlo[b], rhi[b])
        elif op == OP_NEG:
            rlo[dst], rhi[dst] = -rhi[a], -rlo[a]
        elif op == OP_SQR:
            rlo[dst], rhi[dst] = _sqr(rlo[a], rhi[a])
        else:
            raise ValueError(f"unknown opcode {op}")
    out_lo[:] = rlo[tape.out_reg]
    out_hi[:] = rhi[tape.out_reg]


def eval_interval(tape: Tape, boxes: np.ndarray, out_lo: np.ndarray, out_hi: np.ndarray):
    n = boxes.shape[0]
    for start in range(0, n, _CHUNK):
        end = min(start + _CHUNK, n)
        _interval_chunk(tape, boxes[start:end], out_lo[start:end], out_hi[start:end])


def eval_points(tape: Tape, points: np.ndarray, out: np.ndarray):
    n = points.shape[0]
    consts = tape.consts
    for start in range(0, n, _CHUNK):
        end = min(start + _CHUNK, n)
        pts = points[start:end]
        regs = [None] * tape.nregs
        for op, dst, a, b in tape.codes:
            if op == OP_LOAD:
                regs[dst] = pts[:, a].copy()
            elif op == OP_CONST:
                regs[dst] = np.full(end - start, consts[a])
            elif op == OP_ADD:
                regs[dst] = regs[a] + regs[b]
            elif op == OP_SUB:
                regs[dst] = regs[a] - regs[b]
            elif op == OP_MUL:
                regs[dst] = regs[a] * regs[b]
            elif op == OP_NEG:
                regs[dst] = -regs[a]
            elif op == OP_SQR:
                regs[dst] = regs[a] * regs[a]
            else:
                raise ValueError(f"unknown opcode {op}")
        out[start:end] = regs[tape.out_reg]
