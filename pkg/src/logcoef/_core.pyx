# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tape interpreters: the hot kernels of the certifier.

Same operation sequence as the pure-numpy fallback (error-free transforms
plus one nextafter step for directed rounding); compiled with
-ffp-contract=off so no fma contraction can perturb the residuals.  Both
backends are bit-identical by construction.
"""

from libc.math cimport INFINITY, nextafter

import numpy as np

BACKEND_NAME = "compiled"

DEF MAXREGS = 64

cdef double SPLITTER = 134217729.0  # 2**27 + 1

cdef int OP_LOAD = 0
cdef int OP_CONST = 1
cdef int OP_ADD = 2
cdef int OP_SUB = 3
cdef int OP_MUL = 4
cdef int OP_NEG = 5
cdef int OP_SQR = 6


cdef inline double two_sum_err(double a, double b, double s) nogil:
    cdef double bb = s - a
    return (a - (s - bb)) + (b - bb)


cdef inline double prod_err(double a, double b, double p) nogil:
    cdef double ta = SPLITTER * a
    cdef double ah = ta - (ta - a)
    cdef double al = a - ah
    cdef double tb = SPLITTER * b
    cdef double bh = tb - (tb - b)
    cdef double bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


cdef inline double prod_err_split(double a, double ah, double al,
                                  double b, double bh, double bl, double p) nogil:
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


cdef inline double rdown(double s, double e) nogil:
    if e < 0:
        return nextafter(s, -INFINITY)
    return s


cdef inline double rup(double s, double e) nogil:
    if e > 0:
        return nextafter(s, INFINITY)
    return s


cdef inline double add_down(double a, double b) nogil:
    cdef double s = a + b
    return rdown(s, two_sum_err(a, b, s))


cdef inline double add_up(double a, double b) nogil:
    cdef double s = a + b
    return rup(s, two_sum_err(a, b, s))


cdef inline double mul_down(double a, double b) nogil:
    cdef double p = a * b
    return rdown(p, prod_err(a, b, p))


cdef inline double mul_up(double a, double b) nogil:
    cdef double p = a * b
    return rup(p, prod_err(a, b, p))


cdef void _interval_one(const int[:, ::1] codes, const double[::1] consts,
                        const double* box, int out_reg,
                        double* rlo, double* rhi) nogil:
    cdef int k, op, dst, a, b
    cdef double lo, hi, p, e, d, u
    cdef double a1, a2, b1, b2, t
    cdef double a1h, a1l, a2h, a2l, b1h, b1l, b2h, b2l
    for k in range(codes.shape[0]):
        op = codes[k, 0]
        dst = codes[k, 1]
        a = codes[k, 2]
        b = codes[k, 3]
        if op == 0:  # LOAD
            rlo[dst] = box[2 * a]
            rhi[dst] = box[2 * a + 1]
        elif op == 1:  # CONST
            rlo[dst] = consts[a]
            rhi[dst] = consts[a]
        elif op == 2:  # ADD
            lo = add_down(rlo[a], rlo[b])
            hi = add_up(rhi[a], rhi[b])
            rlo[dst] = lo
            rhi[dst] = hi
        elif op == 3:  # SUB
            lo = add_down(rlo[a], -rhi[b])
            hi = add_up(rhi[a], -rlo[b])
            rlo[dst] = lo
            rhi[dst] = hi
        elif op == 4:  # MUL
            # share the Dekker splits across the four corner products
            a1 = rlo[a]; a2 = rhi[a]; b1 = rlo[b]; b2 = rhi[b]
            t = SPLITTER * a1; a1h = t - (t - a1); a1l = a1 - a1h
            t = SPLITTER * a2; a2h = t - (t - a2); a2l = a2 - a2h
            t = SPLITTER * b1; b1h = t - (t - b1); b1l = b1 - b1h
            t = SPLITTER * b2; b2h = t - (t - b2); b2l = b2 - b2h
            p = a1 * b1
            e = prod_err_split(a1, a1h, a1l, b1, b1h, b1l, p)
            lo = rdown(p, e)
            hi = rup(p, e)
            p = a1 * b2
            e = prod_err_split(a1, a1h, a1l, b2, b2h, b2l, p)
            d = rdown(p, e); u = rup(p, e)
            if d < lo: lo = d
            if u > hi: hi = u
            p = a2 * b1
            e = prod_err_split(a2, a2h, a2l, b1, b1h, b1l, p)
            d = rdown(p, e); u = rup(p, e)
            if d < lo: lo = d
            if u > hi: hi = u
            p = a2 * b2
            e = prod_err_split(a2, a2h, a2l, b2, b2h, b2l, p)
            d = rdown(p, e); u = rup(p, e)
            if d < lo: lo = d
            if u > hi: hi = u
            rlo[dst] = lo
            rhi[dst] = hi
        elif op == 5:  # NEG
            lo = -rhi[a]
            hi = -rlo[a]
            rlo[dst] = lo
            rhi[dst] = hi
        elif op == 6:  # SQR
            a1 = rlo[a]; a2 = rhi[a]
            p = a1 * a1
            e = prod_err(a1, a1, p)
            d = rdown(p, e)
            hi = rup(p, e)
            u = a2 * a2
            t = prod_err(a2, a2, u)
            if rup(u, t) > hi: hi = rup(u, t)
            if a1 >= 0:
                lo = d
            elif a2 <= 0:
                lo = rdown(u, t)
            else:
                lo = 0.0
            rlo[dst] = lo
            rhi[dst] = hi


def eval_interval(tape, boxes, out_lo, out_hi):
    cdef const int[:, ::1] codes = tape.codes
    cdef const double[::1] consts = tape.consts
    cdef const double[:, ::1] bx = boxes
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef int out_reg = tape.out_reg
    cdef Py_ssize_t i, n = bx.shape[0]
    cdef double rlo[MAXREGS]
    cdef double rhi[MAXREGS]
    if tape.nregs > MAXREGS:
        raise ValueError("register file too small for this tape")
    with nogil:
        for i in range(n):
            _interval_one(codes, consts, &bx[i, 0], out_reg, rlo, rhi)
            olo[i] = rlo[out_reg]
            ohi[i] = rhi[out_reg]


def eval_points(tape, points, out):
    cdef const int[:, ::1] codes = tape.codes
    cdef const double[::1] consts = tape.consts
    cdef const double[:, ::1] pts = points
    cdef double[::1] o = out
    cdef int out_reg = tape.out_reg
    cdef Py_ssize_t i, n = pts.shape[0]
    cdef int k, op, dst, a, b
    cdef double regs[MAXREGS]
    if tape.nregs > MAXREGS:
        raise ValueError("register file too small for this tape")
    with nogil:
        for i in range(n):
            for k in range(codes.shape[0]):
                op = codes[k, 0]
                dst = codes[k, 1]
                a = codes[k, 2]
                b = codes[k, 3]
                if op == 0:
                    regs[dst] = pts[i, a]
                elif op == 1:
                    regs[dst] = consts[a]
                elif op == 2:
                    regs[dst] = regs[a] + regs[b]
                elif op == 3:
                    regs[dst] = regs[a] - regs[b]
                elif op == 4:
                    regs[dst] = regs[a] * regs[b]
                elif op == 5:
                    regs[dst] = -regs[a]
                elif op == 6:
                    regs[dst] = regs[a] * regs[a]
            o[i] = regs[out_reg]
