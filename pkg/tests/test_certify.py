from fractions import Fraction

import numpy as np
import pytest

from logcoef import certify, objective
from logcoef.certify import (
    Box,
    Interval,
    branch_and_bound,
    certify_faces,
    certify_global,
    interval_eval,
)
from logcoef.objective import FACES, F_POLY


def _frac_value(fn, *xs):
    return fn(*[Fraction(x) for x in xs])


class TestInterval:
    def test_ordering_validated(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.0)

    def test_ops_contain_exact_results(self):
        rng = np.random.default_rng(0)
        for _ in range(3000):
            a, b, c, d = rng.uniform(-10, 10, 4)
            x = Interval(min(a, b), max(a, b))
            y = Interval(min(c, d), max(c, d))
            for op, exact in (
                (x + y, [Fraction(p) + Fraction(q) for p in (x.lo, x.hi) for q in (y.lo, y.hi)]),
                (x - y, [Fraction(p) - Fraction(q) for p in (x.lo, x.hi) for q in (y.lo, y.hi)]),
                (x * y, [Fraction(p) * Fraction(q) for p in (x.lo, x.hi) for q in (y.lo, y.hi)]),
                (x.sqr(), [Fraction(p) ** 2 for p in (x.lo, x.hi)] + ([Fraction(0)] if x.lo < 0 < x.hi else [])),
            ):
                assert Fraction(op.lo) <= min(exact)
                assert Fraction(op.hi) >= max(exact)

    def test_exact_ops_stay_exact(self):
        x = Interval(2.0, 2.0)
        y = Interval(3.0, 3.0)
        assert (x + y).lo == 5.0 and (x + y).hi == 5.0
        assert (x * y).lo == 6.0 and (x * y).hi == 6.0

    def test_scalar_mixing(self):
        x = Interval(1.0, 2.0)
        assert (1 - x).lo <= -1.0 <= (1 - x).hi
        assert (3 * x).hi >= 6.0


class TestIntervalEval:
    def test_degenerate_origin_box(self):
        box = Box.from_bounds([(0, 0)] * 4)
        enc = interval_eval(F_POLY, box)
        # exact value is 32; all operations on these inputs are exact so the
        # enclosure is tight to a few ulp
        assert enc.contains(32.0)
        assert enc.width <= 4 * np.spacing(32.0)

    def test_full_box_covers_attained_value(self):
        box = Box.from_bounds(F_POLY.domain)
        enc = interval_eval(F_POLY, box)
        assert enc.hi >= 48 * (8 / 9)  # attained at (0, 2, 1/3, v)
        assert enc.lo <= 32.0

    def test_soundness_random_boxes(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            bounds = []
            for lo, hi in F_POLY.domain:
                a, b = np.sort(rng.uniform(lo, hi, 2))
                bounds.append((a, b))
            box = Box.from_bounds(bounds)
            enc = interval_eval(F_POLY, box)
            pts = np.column_stack(
                [rng.uniform(a, b, 50) for a, b in bounds]
            )
            vals = F_POLY.values(pts)
            assert vals.min() >= enc.lo
            assert vals.max() <= enc.hi
            # exact rational evaluation at the corners stays inside too
            corner = [Fraction(b[0]) for b in bounds]
            exact = objective.f48_fn(*corner)
            assert Fraction(enc.lo) <= exact <= Fraction(enc.hi)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            interval_eval(F_POLY, Box.from_bounds([(0, 3), (0, 1), (0, 1), (0, 1)]))


class TestBranchAndBound:
    def test_certifies_the_theorem_target(self):
        rep = certify_global(tol=1e-6)
        assert rep.verdict == "certified"
        assert rep.scaled_upper_bound <= 56 + 1e-6
        assert rep.boxes_processed < 10_000_000

    def test_refutes_small_target(self):
        rep = branch_and_bound(F_POLY, target=Fraction(5, 6), tol=1e-6)
        assert rep.verdict == "refuted"
        # witness comfortably past the attained 48 * 8/9 = 42.67 mark
        assert rep.scaled_lower_bound >= 42.6

    def test_degenerate_point_domain(self):
        dom = [(0.5, 0.5), (0.5, 0.5), (0.5, 0.5), (0.5, 0.5)]
        val = objective.f48_fn(0.5, 0.5, 0.5, 0.5)
        rep = branch_and_bound(F_POLY, domain=dom, target=Fraction(1), tol=1e-9)
        assert rep.boxes_processed == 1
        assert rep.verdict == ("certified" if val <= 48 else "refuted")
        rep2 = branch_and_bound(F_POLY, domain=dom, target=Fraction(1, 2), tol=1e-9)
        assert rep2.verdict == "refuted"
        assert rep2.boxes_processed == 1

    def test_anytime_monotonicity(self):
        budgets = [1, 50, 500, 5000, 50_000]
        ubs, lbs = [], []
        for b in budgets:
            rep = branch_and_bound(F_POLY, target=Fraction(7, 6), tol=1e-9,
                                   max_boxes=b, mode="maximize")
            ubs.append(rep.scaled_upper_bound)
            lbs.append(rep.scaled_lower_bound)
        assert all(a >= b for a, b in zip(ubs, ubs[1:]))
        assert all(a <= b for a, b in zip(lbs, lbs[1:]))

    def test_worker_determinism(self):
        r1 = certify_global(tol=1e-6, workers=1)
        r4 = certify_global(tol=1e-6, workers=4)
        assert r1.scaled_upper_bound == r4.scaled_upper_bound
        assert r1.scaled_lower_bound == r4.scaled_lower_bound
        assert r1.witness == r4.witness
        assert r1.boxes_processed == r4.boxes_processed
        assert r1.max_depth == r4.max_depth

    def test_cover_volume_accounting(self):
        rep = branch_and_bound(F_POLY, target=Fraction(7, 6), tol=1e-6,
                               mode="certify", debug_cover=True)
        assert rep.cover_volume_ratio is not None
        assert abs(rep.cover_volume_ratio - 1.0) < 1e-9

    def test_budget_exhaustion_is_inconclusive(self):
        rep = branch_and_bound(FACES["G5"].poly, target=Fraction(23, 48),
                               tol=1e-9, max_boxes=40, mode="certify")
        # target below the max and far too little budget: must not certify
        assert rep.verdict in ("inconclusive", "refuted")

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            branch_and_bound(F_POLY, tol=0.0)
        with pytest.raises(ValueError):
            branch_and_bound(F_POLY, mode="bogus")


@pytest.fixture(scope="module")
def reports():
    return certify_faces()


class TestCertifyFaces:
    def test_g3_bracket_is_tight(self, reports):
        rep = reports["G3"]
        assert abs(rep.certified_upper_bound - 23 / 24) <= 1e-6
        assert abs(rep.best_lower_bound - 23 / 24) <= 1e-6

    def test_g1_upper_bound_covers_seven_sixths(self, reports):
        rep = reports["G1"]
        assert rep.best_lower_bound <= 7 / 6 <= rep.certified_upper_bound
        assert abs(rep.best_lower_bound - 7 / 6) < 1e-9

    def test_g5_bracket(self, reports):
        rep = reports["G5"]
        assert abs(rep.certified_upper_bound - 0.9531) < 2e-3
        assert abs(rep.best_lower_bound - 0.9531) < 2e-3

    def test_all_faces_certified_below_target(self, reports):
        for name, rep in reports.items():
            assert rep.verdict == "certified", name
            assert rep.best_lower_bound <= rep.certified_upper_bound


def test_backend_parity_on_random_boxes():
    from logcoef import _fallback

    try:
        from logcoef import _core
    except ImportError:
        pytest.skip("compiled core not built")
    rng = np.random.default_rng(2)
    tape = F_POLY.tape()
    n = 4096
    lo = rng.uniform(0, 1, (n, 4)) * [2, 2, 1, 1]
    hi = lo + rng.uniform(0, 1, (n, 4)) * ([2, 2, 1, 1] - lo)
    boxes = np.empty((n, 8))
    boxes[:, 0::2] = lo
    boxes[:, 1::2] = hi
    a_lo = np.empty(n); a_hi = np.empty(n)
    b_lo = np.empty(n); b_hi = np.empty(n)
    _core.eval_interval(tape, boxes, a_lo, a_hi)
    _fallback.eval_interval(tape, boxes, b_lo, b_hi)
    assert np.array_equal(a_lo, b_lo)
    assert np.array_equal(a_hi, b_hi)
    pts = 0.5 * (lo + hi)
    a = np.empty(n); b = np.empty(n)
    _core.eval_points(tape, np.ascontiguousarray(pts), a)
    _fallback.eval_points(tape, np.ascontiguousarray(pts), b)
    assert np.array_equal(a, b)
