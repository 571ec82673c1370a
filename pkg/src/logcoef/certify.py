"""Rigorous global bounds by interval branch and bound.

Enclosures come from evaluating the integer-coefficient polynomial tapes in
interval arithmetic with directed rounding (error-free transforms plus one
nextafter step, so the enclosure always contains the exact real value).
Branch and bound bisects the widest coordinate (widths normalized by the
domain side lengths, ties to the lowest index) and discards a box as soon as
its enclosure top cannot beat max(target, best known lower bound).  Lower
bounds come from ordinary float evaluation at box midpoints and at a small
inclusive start grid, backed off by 4 ulp.

The whole frontier is processed per sweep through the batch kernels, so runs
are deterministic and bit-identical for any worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .objective import FACES, F_POLY, SCALE, PolynomialSpec

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum_err(a: float, b: float, s: float) -> float:
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _prod_err(a: float, b: float, p: float) -> float:
    ta = _SPLITTER * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLITTER * b
    bh = tb - (tb - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _down(s: float, e: float) -> float:
    return math.nextafter(s, -math.inf) if e < 0 else s


def _up(s: float, e: float) -> float:
    return math.nextafter(s, math.inf) if e > 0 else s


def _add_down(a, b):
    s = a + b
    return _down(s, _two_sum_err(a, b, s))


def _add_up(a, b):
    s = a + b
    return _up(s, _two_sum_err(a, b, s))


def _mul_down(a, b):
    p = a * b
    return _down(p, _prod_err(a, b, p))


def _mul_up(a, b):
    p = a * b
    return _up(p, _prod_err(a, b, p))


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with outward-rounded arithmetic.

    Every operation encloses the exact real result: bounds that could have
    been rounded toward the interior are pushed one ulp outward, detected via
    error-free transforms, so enclosures stay sound without touching the FPU
    rounding mode.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo!r}, {self.hi!r}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(float(x), float(x))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(_add_down(self.lo, other.lo), _add_up(self.hi, other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _as_interval(other)
        return Interval(_add_down(self.lo, -other.hi), _add_up(self.hi, -other.lo))

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = min(_mul_down(a, c), _mul_down(a, d), _mul_down(b, c), _mul_down(b, d))
        hi = max(_mul_up(a, c), _mul_up(a, d), _mul_up(b, c), _mul_up(b, d))
        return Interval(lo, hi)

    __rmul__ = __mul__

    def sqr(self) -> "Interval":
        a, b = self.lo, self.hi
        hi = max(_mul_up(a, a), _mul_up(b, b))
        if a >= 0:
            lo = _mul_down(a, a)
        elif b <= 0:
            lo = _mul_down(b, b)
        else:
            lo = 0.0
        return Interval(lo, hi)

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(float(x))


@dataclass(frozen=True)
class Box:
    """Axis-aligned product of intervals; the branch-and-bound work unit."""

    intervals: tuple
    depth: int = 0

    @classmethod
    def from_bounds(cls, bounds, depth: int = 0) -> "Box":
        return cls(tuple(Interval(float(lo), float(hi)) for lo, hi in bounds), depth)

    @property
    def ndim(self) -> int:
        return len(self.intervals)

    def as_row(self) -> np.ndarray:
        row = np.empty(2 * self.ndim)
        for i, iv in enumerate(self.intervals):
            row[2 * i] = iv.lo
            row[2 * i + 1] = iv.hi
        return row

    def midpoint(self):
        return tuple(iv.mid for iv in self.intervals)


def interval_eval(poly: PolynomialSpec, box: Box, workers: int = 1) -> Interval:
    """Sound enclosure of the scaled polynomial over the box."""
    if box.ndim != poly.nvars:
        raise ValueError(f"{poly.name} needs {poly.nvars} coordinates, box has {box.ndim}")
    for iv, (lo, hi) in zip(box.intervals, poly.domain):
        if iv.lo < lo or iv.hi > hi:
            raise ValueError(f"box leaves the domain of {poly.name}")
    rows = box.as_row()[None, :]
    lo, hi = _kernels.eval_interval(poly.tape(), rows, workers=workers)
    return Interval(float(lo[0]), float(hi[0]))


@dataclass
class CertificationReport:
    """Outcome of a branch-and-bound run, in the polynomial's own 1/48 scale.

    certified_upper_bound and best_lower_bound are unscaled (divided by 48,
    rounded outward); the scaled_* twins are the exact engine quantities.
    verdict: certified  <=>  scaled upper bound <= 48*target + tol (exact
    rational comparison); refuted <=> the scaled lower bound exceeds the
    target, witnessed by a real point.
    """

    poly_name: str
    target: Fraction
    tolerance: float
    verdict: str
    certified_upper_bound: float
    best_lower_bound: float
    witness: dict
    boxes_processed: int
    max_depth: int
    scaled_upper_bound: float
    scaled_lower_bound: float
    scale: int = SCALE
    cover_volume_ratio: float | None = None

    def as_dict(self) -> dict:
        d = {
            "poly": self.poly_name,
            "target": self.target,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "certified_upper_bound": self.certified_upper_bound,
            "best_lower_bound": self.best_lower_bound,
            "witness": dict(self.witness),
            "boxes_processed": self.boxes_processed,
            "max_depth": self.max_depth,
            "scaled_upper_bound": self.scaled_upper_bound,
            "scaled_lower_bound": self.scaled_lower_bound,
            "scale": self.scale,
        }
        if self.cover_volume_ratio is not None:
            d["cover_volume_ratio"] = self.cover_volume_ratio
        return d


def _fraction_to_float_down(q: Fraction) -> float:
    f = float(q)
    if Fraction(f) > q:
        f = math.nextafter(f, -math.inf)
    return f


def _safe_lb(values: np.ndarray) -> np.ndarray:
    out = values
    for _ in range(4):
        out = np.nextafter(out, -np.inf)
    return out


def _start_points(domain) -> np.ndarray:
    per_dim = {1: 33, 2: 9, 3: 5, 4: 5}[len(domain)]
    axes = [np.linspace(lo, hi, per_dim) for lo, hi in domain]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def branch_and_bound(
    poly: PolynomialSpec,
    domain=None,
    target: Fraction | None = None,
    tol: float = 1e-6,
    max_boxes: int = 10_000_000,
    workers: int = 1,
    mode: str = "auto",
    debug_cover: bool = False,
) -> CertificationReport:
    """Certify poly <= 48*target + tol over the domain, or bracket its max.

    mode "certify" discards against max(scaled target, best lower bound) and
    stops once the global upper bound clears (or a witness refutes) the
    target; mode "maximize" discards against the lower bound alone and stops
    when the upper/lower bracket is within tol.  "auto" picks "certify" when
    a target is given.  tol is on the 48-scaled polynomial.  Budget
    exhaustion yields verdict "inconclusive", never a false "certified".
    """
    if domain is None:
        domain = poly.domain
    domain = tuple((float(lo), float(hi)) for lo, hi in domain)
    if mode == "auto":
        mode = "certify" if target is not None else "maximize"
    if mode not in ("certify", "maximize"):
        raise ValueError(f"unknown mode {mode!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if target is None:
        target = Fraction(7, 6)
    target = Fraction(target)
    tape = poly.tape()
    d = len(domain)
    sides = np.array([hi - lo for lo, hi in domain])
    sides_safe = np.where(sides > 0, sides, 1.0)

    target_scaled = target * SCALE
    target_f = _fraction_to_float_down(target_scaled)
    ts_plus_tol = target_scaled + Fraction(tol)

    # attained lower bound from an inclusive start grid (hits corners exactly)
    pts = _start_points(domain)
    vals = _kernels.eval_points(tape, pts, workers=workers)
    safe = _safe_lb(vals)
    i0 = int(np.argmax(safe))
    best_lb = float(safe[i0])
    witness = pts[i0].copy()

    frontier = np.array([[x for lo_hi in domain for x in lo_hi]])
    parent_hi = np.array([math.inf])
    discarded_max = -math.inf
    boxes_processed = 0
    max_depth = 0
    refuted = Fraction(best_lb) > target_scaled
    # volumes are tracked in normalized coordinates, so the root has volume 1
    discarded_volume = 0.0
    stall_tol = max(tol, 1e-9)
    ub_scaled = math.inf

    def current_ub(active_max: float) -> float:
        return max(discarded_max, active_max)

    while True:
        n = frontier.shape[0]
        if n == 0:
            ub_scaled = discarded_max
            break
        if boxes_processed + n > max_boxes:
            # unevaluated children are still covered by their parents' tops
            ub_scaled = current_ub(float(parent_hi.max()))
            break

        lo_arr, hi_arr = _kernels.eval_interval(tape, frontier, workers=workers)
        boxes_processed += n

        mids = 0.5 * (frontier[:, 0::2] + frontier[:, 1::2])
        mvals = _kernels.eval_points(tape, mids, workers=workers)
        msafe = _safe_lb(mvals)
        j = int(np.argmax(msafe))
        lb_before = best_lb
        if msafe[j] > best_lb:
            best_lb = float(msafe[j])
            witness = mids[j].copy()
        if not refuted and Fraction(best_lb) > target_scaled:
            refuted = True

        threshold = max(target_f, best_lb) if mode == "certify" else best_lb
        keep = hi_arr > threshold
        if np.any(~keep):
            discarded_max = max(discarded_max, float(hi_arr[~keep].max()))
            if debug_cover:
                dropped = frontier[~keep]
                widths = (dropped[:, 1::2] - dropped[:, 0::2]) / sides_safe
                discarded_volume += float(np.prod(widths, axis=1).sum())

        active = frontier[keep]
        active_hi = hi_arr[keep]
        frontier = active
        active_max = float(active_hi.max()) if active.shape[0] else -math.inf
        ub_scaled = current_ub(active_max)

        if active.shape[0] == 0:
            break
        if mode == "certify":
            if not refuted and Fraction(ub_scaled) <= ts_plus_tol:
                break
            if refuted and best_lb - lb_before <= stall_tol:
                break
        if ub_scaled - best_lb <= tol:
            break

        # bisect the widest normalized coordinate; ties to the lowest index
        widths = (active[:, 1::2] - active[:, 0::2]) / sides_safe
        split_dim = np.argmax(widths, axis=1)
        lo_c = active[np.arange(active.shape[0]), 2 * split_dim]
        hi_c = active[np.arange(active.shape[0]), 2 * split_dim + 1]
        mid_c = 0.5 * (lo_c + hi_c)
        splittable = (mid_c > lo_c) & (mid_c < hi_c)
        if np.any(~splittable):
            # width-zero (or one-ulp) boxes cannot be refined further
            stuck_hi = active_hi[~splittable]
            discarded_max = max(discarded_max, float(stuck_hi.max()))
            if debug_cover:
                dropped = active[~splittable]
                w = (dropped[:, 1::2] - dropped[:, 0::2]) / sides_safe
                discarded_volume += float(np.prod(w, axis=1).sum())
            active = active[splittable]
            active_hi = active_hi[splittable]
            split_dim = split_dim[splittable]
            mid_c = mid_c[splittable]
            frontier = active
            if active.shape[0] == 0:
                ub_scaled = discarded_max
                break

        m = active.shape[0]
        children = np.repeat(active, 2, axis=0)
        rows = np.arange(m)
        children[2 * rows, 2 * split_dim + 1] = mid_c
        children[2 * rows + 1, 2 * split_dim] = mid_c
        parent_hi = np.repeat(active_hi, 2)
        frontier = children
        max_depth += 1

    verdict = "inconclusive"
    if refuted or Fraction(best_lb) > target_scaled:
        verdict = "refuted"
    elif Fraction(ub_scaled) <= ts_plus_tol:
        verdict = "certified"

    witness_map = {nm: float(x) for nm, x in zip(poly.var_names, witness)}
    report = CertificationReport(
        poly_name=poly.name,
        target=target,
        tolerance=tol,
        verdict=verdict,
        certified_upper_bound=math.nextafter(ub_scaled / SCALE, math.inf),
        best_lower_bound=math.nextafter(best_lb / SCALE, -math.inf),
        witness=witness_map,
        boxes_processed=boxes_processed,
        max_depth=max_depth,
        scaled_upper_bound=ub_scaled,
        scaled_lower_bound=best_lb,
    )
    if debug_cover:
        active_volume = 0.0
        if frontier.shape[0]:
            w = (frontier[:, 1::2] - frontier[:, 0::2]) / sides_safe
            active_volume = float(np.prod(w, axis=1).sum())
        report.cover_volume_ratio = discarded_volume + active_volume
    return report


# Per-face bracket tolerances on the 48-scaled polynomials.  G3 is univariate
# so a tight bracket is cheap (its quoted value is pinned to 1e-6); G8's
# maximum sits on a u = 1 edge with two interior coordinates, the slowest
# geometry for pure bisection, so it gets a looser (still ~4e-4 on F) bracket.
FACE_TOLS = {"G3": 1e-5, "G8": 0.2}
DEFAULT_FACE_TOL = 5e-3


def certify_faces(
    target: Fraction = Fraction(7, 6),
    tols: dict | None = None,
    max_boxes: int = 4_000_000,
    workers: int = 1,
) -> dict:
    """Branch-and-bound bracket of every face maximum, keyed by face id."""
    tols = {**FACE_TOLS, **(tols or {})}
    out = {}
    for name, face in FACES.items():
        tol = tols.get(name, DEFAULT_FACE_TOL)
        out[name] = branch_and_bound(
            face.poly,
            target=target,
            tol=tol,
            max_boxes=max_boxes,
            workers=workers,
            mode="maximize",
        )
    return out


def certify_global(
    target: Fraction = Fraction(7, 6),
    tol: float = 1e-6,
    max_boxes: int = 10_000_000,
    workers: int = 1,
    debug_cover: bool = False,
) -> CertificationReport:
    """The headline run: certify 48F <= 48*target + tol over all of R."""
    return branch_and_bound(
        F_POLY,
        target=target,
        tol=tol,
        max_boxes=max_boxes,
        workers=workers,
        mode="certify",
        debug_cover=debug_cover,
    )
