"""The class P of functions with positive real part, via atomic measures.

Every h with Re h > 0 on the disk and h(0) = 1 is an average of the kernels
(1 + xi*z)/(1 - xi*z) over |xi| = 1; a finite atomic average

    h(z) = sum_j w_j * (1 + e^{i theta_j} z)/(1 - e^{i theta_j} z)

has Taylor coefficients c_n = 2 * sum_j w_j e^{i n theta_j}, so |c_n| <= 2 is
structural.  Atomic measures are dense enough for extremal search (the extreme
points of P are single atoms) and avoid quadrature error entirely.

The second half of the module is the two-parameter description of (c_2, c_3)
in terms of c_1: for h in P with c_1 in [0, 2] there are x, t in the closed
unit disk with

    2 c_2 = c_1^2 + x (4 - c_1^2)
    4 c_3 = c_1^3 + 2 (4 - c_1^2) c_1 x - c_1 (4 - c_1^2) x^2
            + 2 (4 - c_1^2)(1 - |x|^2) t

and the same shape on the second factor (p_1, y, s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ABS_TOL = 1e-12
X_DEGENERATE_TOL = 1e-10


class InvalidMeasureError(ValueError):
    """Atomic measure whose weights are negative or do not sum to 1."""


class NotInClassError(ValueError):
    """A coefficient triple that no function of P can produce."""


@dataclass(frozen=True)
class HerglotzMeasure:
    """Finite atomic probability measure on the unit circle.

    atoms: sequence of (angle in radians, weight >= 0); weights sum to 1.
    conjugate_symmetric: the atom multiset is invariant under theta -> -theta,
    which forces every c_n to be real.
    """

    atoms: tuple
    conjugate_symmetric: bool = False

    def __post_init__(self):
        atoms = tuple((float(t), float(w)) for t, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        validate_measure(self)

    @property
    def weights(self):
        return tuple(w for _, w in self.atoms)

    @property
    def angles(self):
        return tuple(t for t, _ in self.atoms)

    def rotated(self, phi: float) -> "HerglotzMeasure":
        """Shift every atom angle by phi (multiplies c_n by e^{i n phi})."""
        return HerglotzMeasure(
            tuple((t + phi, w) for t, w in self.atoms), conjugate_symmetric=False
        )


def validate_measure(m: HerglotzMeasure) -> None:
    total = math.fsum(w for _, w in m.atoms)
    if any(w < 0 for _, w in m.atoms):
        raise InvalidMeasureError("negative atom weight")
    if abs(total - 1.0) > ABS_TOL:
        raise InvalidMeasureError(f"weights sum to {total!r}, expected 1")
    if m.conjugate_symmetric:
        # multiset of (angle mod 2pi, weight) must be invariant under negation
        def canon(t):
            return round(math.remainder(t, 2 * math.pi), 12)

        bag = {}
        for t, w in m.atoms:
            bag[canon(t)] = bag.get(canon(t), 0.0) + w
        for t, w in bag.items():
            if abs(bag.get(canon(-t), 0.0) - w) > 1e-9:
                raise InvalidMeasureError("atoms are not conjugate-symmetric")


def herglotz_coefficients(m: HerglotzMeasure, n: int):
    """Taylor coefficients c_1..c_n of the represented function.

    For a conjugate-symmetric measure the exact coefficients are real, so the
    float-noise imaginary residue of the pair sums is dropped outright.
    """
    validate_measure(m)
    angles = np.array(m.angles)
    weights = np.array(m.weights)
    ns = np.arange(1, n + 1)
    coeffs = 2.0 * (weights[None, :] * np.exp(1j * ns[:, None] * angles[None, :])).sum(axis=1)
    if m.conjugate_symmetric:
        coeffs = coeffs.real.astype(complex)
    return tuple(complex(c) for c in coeffs)


def sample_measure(atom_count: int, real_c1: bool, rng: np.random.Generator) -> HerglotzMeasure:
    """Draw a random atomic measure.

    Angles are uniform on the circle and weights come from the flat simplex
    distribution.  With real_c1 the measure is built from +/- angle pairs with
    shared weights, which makes it conjugate-symmetric (all c_n real); the
    atom_count then counts pairs.
    """
    if atom_count < 1:
        raise ValueError("atom_count must be >= 1")
    weights = rng.standard_exponential(atom_count)
    weights /= weights.sum()
    if real_c1:
        half = rng.uniform(0.0, math.pi, atom_count)
        atoms = []
        for t, w in zip(half, weights):
            atoms.append((t, w / 2))
            atoms.append((-t, w / 2))
        return HerglotzMeasure(tuple(atoms), conjugate_symmetric=True)
    angles = rng.uniform(0.0, 2 * math.pi, atom_count)
    return HerglotzMeasure(tuple(zip(angles, weights)))


@dataclass(frozen=True)
class LemmaParams:
    """(c1, x, t) with c1 in [0, 2] and x, t in the closed unit disk.

    The identically shaped second-factor instance holds (p1, y, s).
    """

    c1: float
    x: complex = 0j
    t: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "t", complex(self.t))
        if not 0.0 <= self.c1 <= 2.0:
            raise ValueError(f"c1 = {self.c1!r} outside [0, 2]")
        if abs(self.x) > 1 + ABS_TOL:
            raise ValueError(f"|x| = {abs(self.x)!r} exceeds 1")
        if abs(self.t) > 1 + ABS_TOL:
            raise ValueError(f"|t| = {abs(self.t)!r} exceeds 1")


def lemma_coefficients(c1, x, t):
    """The two displayed formulas for (c2, c3); no range validation.

    Works elementwise on numpy arrays as well as on scalars; the second
    factor uses the same shape with (p1, y, s).
    """
    r = 4.0 - c1 * c1
    c2 = (c1 * c1 + x * r) / 2.0
    c3 = (c1**3 + 2.0 * r * c1 * x - c1 * r * x * x + 2.0 * r * (1.0 - abs(x) ** 2) * t) / 4.0
    return c2, c3


def lemma_forward(params: LemmaParams):
    """(c2, c3) generated by a validated (c1, x, t)."""
    return lemma_coefficients(params.c1, params.x, params.t)


@dataclass(frozen=True)
class LemmaInversion:
    x: complex
    t: complex
    t_determined: bool


def lemma_invert(c1: float, c2: complex, c3: complex) -> LemmaInversion:
    """Recover (x, t) from a coefficient triple with real c1 in [0, 2).

    Doubles as a feasibility test: a recovered |x| > 1 means the triple is not
    the start of any P-coefficient sequence.  When |x| = 1 (within tolerance)
    the t-coefficient vanishes and t is reported undetermined.
    """
    c1 = float(c1)
    if not 0.0 <= c1 < 2.0:
        if c1 == 2.0:
            raise ValueError("c1 = 2 degenerates the parametrization (x, t drop out)")
        raise ValueError(f"c1 = {c1!r} outside [0, 2)")
    r = 4.0 - c1 * c1
    x = (2.0 * c2 - c1 * c1) / r
    if abs(x) > 1 + X_DEGENERATE_TOL:
        raise NotInClassError(f"recovered |x| = {abs(x)!r} > 1: triple not attainable in P")
    if 1.0 - abs(x) < X_DEGENERATE_TOL:
        return LemmaInversion(x=x, t=0j, t_determined=False)
    denom = 2.0 * r * (1.0 - abs(x) ** 2)
    t = (4.0 * c3 - c1**3 - 2.0 * r * c1 * x + c1 * r * x * x) / denom
    excess = abs(t) - 1.0
    if excess > X_DEGENERATE_TOL:
        # For feasible data |t| <= 1; when the denominator is nearly doubly
        # degenerate (c1 -> 2 together with |x| -> 1) rounding noise can push
        # the quotient past 1.  Renormalizing then moves the reconstructed
        # c3 by excess*denom, so a noise-level excess is clamped and anything
        # larger is genuine infeasibility.
        if excess * denom <= X_DEGENERATE_TOL:
            t = t / abs(t)
        else:
            raise NotInClassError(
                f"recovered |t| = {abs(t)!r} > 1: triple not attainable in P"
            )
    return LemmaInversion(x=x, t=t, t_determined=True)
