"""Tiny expression DAG and tape compiler for the polynomial kernels.

Polynomials are written once as plain Python functions using only +, -, * and
integer constants.  Called with floats (or numpy arrays, Fractions, sympy
symbols) they evaluate directly; called with Var nodes they build a DAG that
compiles to a flat instruction tape.  The tape is what the interval and point
kernels execute, so every backend runs the identical operation sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OP_LOAD = 0
OP_CONST = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_NEG = 5
OP_SQR = 6

MAX_REGS = 64


class Expr:
    __slots__ = ("kind", "a", "b", "value", "index")

    def __init__(self, kind, a=None, b=None, value=0.0, index=-1):
        self.kind = kind
        self.a = a
        self.b = b
        self.value = value
        self.index = index

    @staticmethod
    def lift(x):
        if isinstance(x, Expr):
            return x
        return Expr("const", value=float(x))

    def __add__(self, other):
        return Expr("add", self, Expr.lift(other))

    def __radd__(self, other):
        return Expr("add", Expr.lift(other), self)

    def __sub__(self, other):
        return Expr("sub", self, Expr.lift(other))

    def __rsub__(self, other):
        return Expr("sub", Expr.lift(other), self)

    def __mul__(self, other):
        return Expr("mul", self, Expr.lift(other))

    def __rmul__(self, other):
        return Expr("mul", Expr.lift(other), self)

    def __neg__(self):
        return Expr("neg", self)


def variables(n):
    return [Expr("var", index=i) for i in range(n)]


@dataclass(frozen=True)
class Tape:
    """Flat instruction list: rows of (op, dst, a, b) over a register file."""

    codes: np.ndarray
    consts: np.ndarray
    nregs: int
    nvars: int
    out_reg: int

    @property
    def n_instructions(self) -> int:
        return len(self.codes)


def compile_tape(root: Expr, nvars: int) -> Tape:
    """Topologically order the DAG, share common nodes, allocate registers."""
    order = []
    seen = {}

    def visit(node):
        key = id(node)
        if key in seen:
            return
        if node.kind in ("add", "sub", "mul"):
            visit(node.a)
            visit(node.b)
        elif node.kind == "neg":
            visit(node.a)
        seen[key] = len(order)
        order.append(node)

    visit(root)

    # last use of each node, for register recycling
    last_use = {id(n): i for i, n in enumerate(order)}
    for i, n in enumerate(order):
        for child in (n.a, n.b):
            if isinstance(child, Expr):
                last_use[id(child)] = max(last_use[id(child)], i)

    codes = []
    consts = []
    const_ix = {}
    reg_of = {}
    free = []
    next_reg = 0

    def alloc():
        nonlocal next_reg
        if free:
            return free.pop()
        r = next_reg
        next_reg += 1
        if r >= MAX_REGS:
            raise ValueError("expression too large for the register file")
        return r

    for i, n in enumerate(order):
        if n.kind == "var":
            dst = alloc()
            codes.append((OP_LOAD, dst, n.index, 0))
        elif n.kind == "const":
            v = float(n.value)
            if v not in const_ix:
                const_ix[v] = len(consts)
                consts.append(v)
            dst = alloc()
            codes.append((OP_CONST, dst, const_ix[v], 0))
        elif n.kind == "neg":
            dst = alloc()
            codes.append((OP_NEG, dst, reg_of[id(n.a)], 0))
        elif n.kind == "mul" and n.a is n.b:
            dst = alloc()
            codes.append((OP_SQR, dst, reg_of[id(n.a)], 0))
        else:
            op = {"add": OP_ADD, "sub": OP_SUB, "mul": OP_MUL}[n.kind]
            dst = alloc()
            codes.append((op, dst, reg_of[id(n.a)], reg_of[id(n.b)]))
        reg_of[id(n)] = dst
        # release registers whose value is dead after this instruction
        for child in (n.a, n.b):
            if isinstance(child, Expr) and last_use[id(child)] == i:
                r = reg_of[id(child)]
                if r != dst:
                    free.append(r)

    return Tape(
        codes=np.array(codes, dtype=np.int32).reshape(-1, 4),
        consts=np.array(consts, dtype=np.float64),
        nregs=next_reg,
        nvars=nvars,
        out_reg=reg_of[id(root)],
    )
