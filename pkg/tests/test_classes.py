import numpy as np
import pytest

from logcoef.caratheodory import herglotz_coefficients, sample_measure
from logcoef.classes import CtcInstance, a234_from_cp, ctc_from, starlike_from
from logcoef.functionals import gamma_vector
from logcoef.series import TruncatedSeries, koebe

HALF_PLANE = TruncatedSeries([1] + [2] * 8)  # (1+z)/(1-z)
ONE = TruncatedSeries([1] + [0] * 8)
ODD = TruncatedSeries([1, 0, 2, 0, 2, 0, 2, 0, 2])  # (1+z^2)/(1-z^2)


class TestStarlikeFrom:
    def test_koebe(self):
        g = starlike_from(HALF_PLANE, 8)
        assert g.coeffs == tuple(complex(n) for n in range(9))

    def test_identity(self):
        g = starlike_from(ONE, 8)
        assert g.coeffs == (0, 1) + (0,) * 7

    def test_odd_starlike(self):
        g = starlike_from(ODD, 8)
        expected = (0, 1, 0, 1, 0, 1, 0, 1, 0)
        assert all(abs(a - b) < 1e-14 for a, b in zip(g.coeffs, expected))

    def test_requires_unit_constant(self):
        with pytest.raises(ValueError):
            starlike_from(TruncatedSeries([2] * 9), 8)

    def test_b2_equals_p1_exactly(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            m = sample_measure(3, False, rng)
            p = TruncatedSeries((1 + 0j,) + herglotz_coefficients(m, 7))
            g = starlike_from(p, 8)
            assert g.coeffs[2] == p.coeffs[1]


class TestCtcFrom:
    def test_koebe_composition(self):
        f = ctc_from(koebe(8), HALF_PLANE, 8)
        assert all(abs(f.coeffs[n] - n) < 1e-13 for n in range(9))

    def test_trivial_h(self):
        f = ctc_from(koebe(8), ONE, 8)
        # n a_n = b_n = n, so a_n = 1 for every n
        assert all(abs(f.coeffs[n] - 1) < 1e-14 for n in range(1, 9))

    def test_odd_h_frozen_values(self):
        f = ctc_from(koebe(8), ODD, 8)
        assert abs(f.coeffs[2] - 1) < 1e-14
        assert abs(f.coeffs[3] - 5 / 3) < 1e-14
        assert abs(f.coeffs[4] - 2) < 1e-14


class TestA234:
    def test_koebe_case(self):
        assert a234_from_cp(2, 2, 2, 2, 2, 2) == (2, 3, 4)

    def test_zero_case(self):
        assert a234_from_cp(0, 0, 0, 0, 0, 0) == (0, 0, 0)

    def test_cross_check_with_recurrence(self):
        a2, a3, a4 = a234_from_cp(0, 2, 0, 2, 2, 2)
        assert (a2, a3, a4) == (1, 5 / 3, 2)

    def test_oracle_equivalence_bulk(self):
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(1000):
            mp = sample_measure(1 + rng.integers(3), rng.uniform() < 0.5, rng)
            mh = sample_measure(1 + rng.integers(3), False, rng)
            inst = CtcInstance.from_measures(mp, mh, 4)
            p = herglotz_coefficients(mp, 3)
            c = herglotz_coefficients(mh, 3)
            a2, a3, a4 = a234_from_cp(*c, *p)
            worst = max(
                worst,
                abs(a2 - inst.f.coeffs[2]),
                abs(a3 - inst.f.coeffs[3]),
                abs(a4 - inst.f.coeffs[4]),
            )
        assert worst < 1e-12


class TestCtcInstance:
    def test_residuals_small(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            mp = sample_measure(2, True, rng)
            mh = sample_measure(2, False, rng)
            inst = CtcInstance.from_measures(mp, mh, 10)
            res_g, res_f = inst.residuals()
            assert res_g < 1e-12 and res_f < 1e-12

    def test_koebe_self_consistency(self):
        inst = CtcInstance.from_series(HALF_PLANE, HALF_PLANE, 8)
        assert all(abs(inst.f.coeffs[n] - n) < 1e-13 for n in range(9))


def test_starlike_log_identity():
    # z g' = g p forces 2 n gamma_n(g) = p_n
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(200):
        m = sample_measure(1 + rng.integers(4), False, rng)
        pcoef = herglotz_coefficients(m, 10)
        p = TruncatedSeries((1 + 0j,) + pcoef)
        g = starlike_from(p, 11)
        gv = gamma_vector(g, 10)
        for n in range(1, 11):
            worst = max(worst, abs(2 * n * gv[n] - pcoef[n - 1]))
            assert abs(gv[n]) <= 1 / n + 1e-12
    assert worst < 1e-12
