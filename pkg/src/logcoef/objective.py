"""The triangle-inequality majorant F and its eight codimension-1 faces.

Everything here is driven by the 48-scaled integer-coefficient polynomial

    48F = c^3 + c p^2 + 2 p^3 + 2cu(4-c^2) + 3cu^2(4-c^2) + 6(4-c^2)(1-u^2)
          + 2pu(4-c^2) + cv(4-p^2) + 3pv(4-p^2) + pv^2(4-p^2) + 2(4-p^2)(1-v^2)

over the hyper-rectangle R = [0,2] x [0,2] x [0,1] x [0,1], so that the
certification target "F <= 7/6" becomes the exact integer statement
"48F <= 56".  Every term is nonnegative on R, hence F >= 0.

Face polynomials G1..G8 restrict one coordinate to an endpoint.  G4, G7 and
G8 are exact restrictions; G1, G2, G3, G5 and G6 additionally bound the
dropped |x| or |y| factors by 1, which can only increase the value.  The G6
restriction is implemented from its expanded form (the unexpanded display it
comes from carries an obvious typo, cp(4-p^2) for c(4-p^2), that contradicts
the expansion printed right under it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from . import _kernels
from ._expr import compile_tape, variables
from .classes import a234_from_cp
from .caratheodory import lemma_coefficients

SCALE = 48

FULL_DOMAIN = ((0.0, 2.0), (0.0, 2.0), (0.0, 1.0), (0.0, 1.0))


def f48_fn(c, p, u, v):
    """48F; ring-polymorphic (floats, numpy arrays, Fractions, Expr nodes)."""
    x = 4 - c * c
    y = 4 - p * p
    zu = 1 - u * u
    zv = 1 - v * v
    return (
        c * (c * c)
        + c * (p * p)
        + 2 * (p * (p * p))
        + 2 * (c * (u * x))
        + 3 * (c * ((u * u) * x))
        + 6 * (x * zu)
        + 2 * (p * (u * x))
        + c * (v * y)
        + 3 * (p * (v * y))
        + p * ((v * v) * y)
        + 2 * (y * zv)
    )


def g1_fn(p, v):
    y = 4 - p * p
    return 2 * (p * (p * p)) + 24 + 8 * p + 3 * (p * (v * y)) + p * ((v * v) * y) + 2 * (y * (1 - v * v))


def g2_fn(p, v):
    y = 4 - p * p
    return (
        8 + 2 * (p * p) + 2 * (p * (p * p)) + 2 * (v * y)
        + 3 * (p * (v * y)) + p * ((v * v) * y) + 2 * (y * (1 - v * v))
    )


def g3_fn(c):
    x = 4 - c * c
    return c * (c * c) + 5 * (c * x) + 6 * x + 4 * c + 8


def g4_fn(c, u):
    x = 4 - c * c
    return c * (c * c) + 4 * c + 16 + 2 * (c * (u * x)) + 3 * (c * ((u * u) * x)) + 6 * (x * (1 - u * u)) + 4 * (u * x)


def g5_fn(c, p):
    x = 4 - c * c
    y = 4 - p * p
    return c * (c * c) + 6 * x + c * (p * p) + 2 * (p * (p * p)) + 2 * y + 4 * (p * y) + c * y


def g6_fn(c, p):
    x = 4 - c * c
    y = 4 - p * p
    return c * (c * c) + c * (p * p) + 2 * (p * (p * p)) + 5 * (c * x) + 2 * (p * x) + 2 * y + 4 * (p * y) + c * y


def g7_fn(c, p, u):
    x = 4 - c * c
    y = 4 - p * p
    return (
        c * (c * c) + c * (p * p) + 2 * (p * (p * p)) + 2 * (c * (u * x))
        + 3 * (c * ((u * u) * x)) + 6 * (x * (1 - u * u)) + 2 * (p * (u * x)) + 2 * y
    )


def g8_fn(c, p, u):
    x = 4 - c * c
    y = 4 - p * p
    return (
        c * (c * c) + c * (p * p) + 2 * (p * (p * p)) + 2 * (c * (u * x))
        + 3 * (c * ((u * u) * x)) + 6 * (x * (1 - u * u)) + 2 * (p * (u * x))
        + c * y + 4 * (p * y)
    )


@dataclass(frozen=True)
class PolynomialSpec:
    """A 48-scaled polynomial with its box domain and variable names."""

    name: str
    fn: object
    var_names: tuple
    domain: tuple
    exact_restriction: bool = True

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def tape(self):
        return _tape_for(self.name)

    def values(self, points: np.ndarray, workers: int = 1) -> np.ndarray:
        """Float values of the scaled polynomial at rows of `points`."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return _kernels.eval_points(self.tape(), pts, workers=workers)

    def value(self, *coords) -> float:
        return float(self.fn(*[float(x) for x in coords]))

    def check_domain(self, coords) -> None:
        if len(coords) != self.nvars:
            raise ValueError(f"{self.name} takes {self.nvars} coordinates, got {len(coords)}")
        for x, (lo, hi), nm in zip(coords, self.domain, self.var_names):
            if not lo <= x <= hi:
                raise ValueError(f"{nm} = {x!r} outside [{lo}, {hi}]")


F_POLY = PolynomialSpec("F", f48_fn, ("c", "p", "u", "v"), FULL_DOMAIN)

# Face metadata: the polynomial, which coordinate is pinned where, how a face
# point embeds into R (aux supplies the relaxed coordinates), whether the face
# is an exact restriction of F, and the reference value the face table
# compares against.
FACE_IDS = ("G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8")


@dataclass(frozen=True)
class FaceSpec:
    poly: PolynomialSpec
    fixed: tuple  # (coordinate name, value)
    aux_names: tuple  # relaxed/eliminated coordinates, swept in dominance checks
    embed: object  # (params, aux) -> (c, p, u, v)
    quoted_max: float

    @property
    def name(self) -> str:
        return self.poly.name


FACES = {
    "G1": FaceSpec(
        PolynomialSpec("G1", g1_fn, ("p", "v"), ((0, 2), (0, 1)), exact_restriction=False),
        ("c", 0.0), ("u",), lambda par, aux: (0.0, par[0], aux[0], par[1]),
        quoted_max=7 / 6,
    ),
    "G2": FaceSpec(
        PolynomialSpec("G2", g2_fn, ("p", "v"), ((0, 2), (0, 1)), exact_restriction=False),
        ("c", 2.0), ("u",), lambda par, aux: (2.0, par[0], aux[0], par[1]),
        quoted_max=0.696,
    ),
    "G3": FaceSpec(
        PolynomialSpec("G3", g3_fn, ("c",), ((0, 2),), exact_restriction=False),
        ("p", 0.0), ("u", "v"), lambda par, aux: (par[0], 0.0, aux[0], aux[1]),
        quoted_max=23 / 24,
    ),
    "G4": FaceSpec(
        PolynomialSpec("G4", g4_fn, ("c", "u"), ((0, 2), (0, 1))),
        ("p", 2.0), ("v",), lambda par, aux: (par[0], 2.0, par[1], aux[0]),
        quoted_max=1.005,
    ),
    "G5": FaceSpec(
        PolynomialSpec("G5", g5_fn, ("c", "p"), ((0, 2), (0, 2)), exact_restriction=False),
        ("u", 0.0), ("v",), lambda par, aux: (par[0], par[1], 0.0, aux[0]),
        quoted_max=0.9531,
    ),
    "G6": FaceSpec(
        PolynomialSpec("G6", g6_fn, ("c", "p"), ((0, 2), (0, 2)), exact_restriction=False),
        ("u", 1.0), ("v",), lambda par, aux: (par[0], par[1], 1.0, aux[0]),
        quoted_max=5 / 6,
    ),
    "G7": FaceSpec(
        PolynomialSpec("G7", g7_fn, ("c", "p", "u"), ((0, 2), (0, 2), (0, 1))),
        ("v", 0.0), (), lambda par, aux: (par[0], par[1], par[2], 0.0),
        quoted_max=1.005,
    ),
    "G8": FaceSpec(
        PolynomialSpec("G8", g8_fn, ("c", "p", "u"), ((0, 2), (0, 2), (0, 1))),
        ("v", 1.0), (), lambda par, aux: (par[0], par[1], par[2], 1.0),
        quoted_max=1.052,
    ),
}

_ALL_POLYS = {"F": F_POLY, **{k: f.poly for k, f in FACES.items()}}


@lru_cache(maxsize=None)
def _tape_for(name: str):
    spec = _ALL_POLYS[name]
    vs = variables(spec.nvars)
    return compile_tape(spec.fn(*vs), spec.nvars)


@dataclass(frozen=True)
class FPoint:
    """A point of R = [0,2] x [0,2] x [0,1] x [0,1]."""

    c: float
    p: float
    u: float
    v: float

    def __post_init__(self):
        F_POLY.check_domain((self.c, self.p, self.u, self.v))

    def as_tuple(self):
        return (self.c, self.p, self.u, self.v)


def F_value(pt: FPoint) -> float:
    """F at a point of R, computed as (integer-coefficient 48F) / 48."""
    return f48_fn(pt.c, pt.p, pt.u, pt.v) / SCALE


def F_value_terms(pt: FPoint) -> float:
    """F as the literal sum of the eleven rational-coefficient terms."""
    c, p, u, v = pt.as_tuple()
    x = 4 - c * c
    y = 4 - p * p
    return (
        c**3 / 48 + c * p * p / 48 + p**3 / 24 + c * u * x / 24 + c * u * u * x / 16
        + x * (1 - u * u) / 8 + p * u * x / 24 + c * v * y / 48 + p * v * y / 16
        + p * v * v * y / 48 + y * (1 - v * v) / 24
    )


def face_value(face_id: str, params) -> float:
    """Value of the named face polynomial (unscaled) at the given params."""
    if face_id not in FACES:
        raise ValueError(f"unknown face {face_id!r}; expected one of {FACE_IDS}")
    spec = FACES[face_id].poly
    coords = tuple(float(x) for x in params)
    spec.check_domain(coords)
    return spec.value(*coords) / SCALE


def grad_F(pt: FPoint):
    """Analytic gradient of F (re-derived from the eleven terms)."""
    c, p, u, v = pt.as_tuple()
    x = 4 - c * c
    y = 4 - p * p
    dc = (3 * c * c + p * p + 2 * u * (4 - 3 * c * c) + 3 * u * u * (4 - 3 * c * c)
          - 12 * c * (1 - u * u) - 4 * c * p * u + v * y)
    dp = (2 * c * p + 6 * p * p + 2 * u * x - 2 * c * p * v + 3 * v * (4 - 3 * p * p)
          + v * v * (4 - 3 * p * p) - 4 * p * (1 - v * v))
    du = x * (2 * c + 2 * p + 6 * c * u - 12 * u)
    dv = y * (c + 3 * p + 2 * p * v - 4 * v)
    return (dc / SCALE, dp / SCALE, du / SCALE, dv / SCALE)


def grad_48f_arrays(c, p, u, v):
    """Vectorized gradient of 48F (for root finding over arrays)."""
    x = 4 - c * c
    y = 4 - p * p
    dc = (3 * c * c + p * p + 2 * u * (4 - 3 * c * c) + 3 * u * u * (4 - 3 * c * c)
          - 12 * c * (1 - u * u) - 4 * c * p * u + v * y)
    dp = (2 * c * p + 6 * p * p + 2 * u * x - 2 * c * p * v + 3 * v * (4 - 3 * p * p)
          + v * v * (4 - 3 * p * p) - 4 * p * (1 - v * v))
    du = x * (2 * c + 2 * p + 6 * c * u - 12 * u)
    dv = y * (c + 3 * p + 2 * p * v - 4 * v)
    return dc, dp, du, dv


def bound_chain_check(c1, x, t, p1, y, s):
    """(lhs, rhs) of the triangle-inequality step.

    lhs is |a4 - a2 a3 + a2^3/3| with (c2, c3) and (p2, p3) generated from the
    two-parameter description; rhs is F(c1, |p1|, |x|, |y|).  The chain
    guarantees lhs <= rhs whenever c1 in [0,2], p1 real with |p1| <= 2 and
    the four free parameters lie in the closed unit disk.
    """
    c1 = float(c1)
    p1 = float(p1)
    if not 0.0 <= c1 <= 2.0:
        raise ValueError(f"c1 = {c1!r} outside [0, 2]")
    if abs(p1) > 2.0:
        raise ValueError(f"|p1| = {abs(p1)!r} exceeds 2")
    for nm, z in (("x", x), ("y", y), ("s", s), ("t", t)):
        if abs(z) > 1.0 + 1e-12:
            raise ValueError(f"|{nm}| exceeds 1")
    c2, c3 = lemma_coefficients(c1, x, t)
    p2, p3 = lemma_coefficients(p1, y, s)
    a2, a3, a4 = a234_from_cp(c1, c2, c3, p1, p2, p3)
    lhs = abs(a4 - a2 * a3 + a2**3 / 3)
    rhs = F_value(FPoint(c1, abs(p1), abs(x), abs(y)))
    return lhs, rhs


def bound_chain_arrays(c1, x, t, p1, y, s):
    """Vectorized (lhs, rhs) over numpy arrays; no validation."""
    c2, c3 = lemma_coefficients(c1, x, t)
    p2, p3 = lemma_coefficients(p1, y, s)
    a2, a3, a4 = a234_from_cp(c1, c2, c3, p1, p2, p3)
    lhs = np.abs(a4 - a2 * a3 + a2**3 / 3)
    rhs = f48_fn(c1, np.abs(p1), np.abs(x), np.abs(y)) / SCALE
    return lhs, rhs


def _grid_axes(domain, budget):
    d = len(domain)
    n = max(3, int(round(budget ** (1.0 / d))))
    return [np.linspace(lo, hi, n) for lo, hi in domain]


def poly_maximum(spec: PolynomialSpec, grid_budget: int = 2_000_000, polish_starts: int = 8):
    """Attained maximum of a scaled polynomial: dense grid plus local polish.

    Returns (max value / 48, argmax tuple).  Independent of the interval
    machinery; this is the "computed max" column of the face table.
    """
    axes = _grid_axes(spec.domain, grid_budget)
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([m.ravel() for m in mesh])
    vals = spec.values(pts)
    order = np.argsort(vals)[::-1][:polish_starts]
    best_v = -math.inf
    best_x = None
    for i in order:
        res = optimize.minimize(
            lambda z: -spec.fn(*z),
            pts[i],
            method="Nelder-Mead",
            bounds=spec.domain,
            options={"xatol": 1e-12, "fatol": 1e-12, "maxiter": 20000, "maxfev": 40000},
        )
        if -res.fun > best_v:
            best_v = -res.fun
            best_x = tuple(float(z) for z in res.x)
    # keep the raw grid winner if polish somehow went downhill
    top = float(vals[order[0]])
    if top > best_v:
        best_v = top
        best_x = tuple(float(z) for z in pts[order[0]])
    return best_v / SCALE, best_x


def face_maximum(face_id: str, grid_budget: int = 2_000_000):
    """Attained (max, argmax) of a face polynomial, unscaled."""
    if face_id not in FACES:
        raise ValueError(f"unknown face {face_id!r}")
    return poly_maximum(FACES[face_id].poly, grid_budget=grid_budget)


def interior_stationary_points(n_starts: int = 200, seed: int = 0, tol: float = 1e-10):
    """Zeros of grad F strictly inside R, found by multi-start root finding.

    Returns a deduplicated list of (point, F value).
    """
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in FULL_DOMAIN])
    hi = np.array([b[1] for b in FULL_DOMAIN])
    found = []

    def system(z):
        return np.array(grad_48f_arrays(*z))

    for _ in range(n_starts):
        z0 = lo + (hi - lo) * rng.uniform(0.05, 0.95, size=4)
        sol = optimize.root(system, z0, method="hybr", tol=1e-12)
        if not sol.success:
            continue
        z = sol.x
        if np.any(z <= lo + 1e-9) or np.any(z >= hi - 1e-9):
            continue
        if np.max(np.abs(system(z))) > tol:
            continue
        if any(np.max(np.abs(z - np.array(w))) < 1e-7 for w, _ in found):
            continue
        found.append((tuple(float(x) for x in z), float(f48_fn(*z) / SCALE)))
    return found
