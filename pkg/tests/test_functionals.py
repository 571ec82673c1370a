import math

import numpy as np
import pytest

from logcoef.functionals import (
    fekete_szego,
    gamma3_expanded,
    gamma_closed,
    gamma_vector,
    milin_lhs,
)
from logcoef.classes import a234_from_cp
from logcoef.series import SchlichtSeries, koebe


def _random_schlicht(rng, order=5, scale=0.8):
    tail = scale * (rng.standard_normal(order - 1) + 1j * rng.standard_normal(order - 1))
    return SchlichtSeries((0, 1, *tail))


class TestGammaVector:
    def test_koebe(self):
        gv = gamma_vector(koebe(21), 20)
        for n in range(1, 21):
            assert abs(gv[n] - 1 / n) < 1e-12

    def test_identity_function(self):
        f = SchlichtSeries((0, 1, 0, 0, 0, 0))
        gv = gamma_vector(f, 4)
        assert all(abs(g) == 0 for g in gv.gammas)

    def test_rotation_leaves_moduli(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            f = _random_schlicht(rng, order=7)
            phi = rng.uniform(0, 2 * math.pi)
            rot = SchlichtSeries(
                tuple(a * np.exp(1j * (n - 1) * phi) for n, a in enumerate(f.coeffs))
            )
            a = gamma_vector(f, 6)
            b = gamma_vector(rot, 6)
            for n in range(1, 7):
                assert abs(abs(a[n]) - abs(b[n])) < 1e-12

    def test_insufficient_order(self):
        with pytest.raises(ValueError):
            gamma_vector(koebe(4), 4)


class TestGammaClosed:
    def test_koebe(self):
        g1, g2, g3 = gamma_closed(2, 3, 4)
        assert g1 == 1 and g2 == 1 / 2
        assert abs(g3 - 1 / 3) < 1e-15

    def test_zeros(self):
        assert gamma_closed(0, 0, 0) == (0, 0, 0)

    def test_matches_series_oracle(self):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(1000):
            f = _random_schlicht(rng)
            gv = gamma_vector(f, 3)
            g1, g2, g3 = gamma_closed(f.coeffs[2], f.coeffs[3], f.coeffs[4])
            worst = max(worst, abs(g1 - gv[1]), abs(g2 - gv[2]), abs(g3 - gv[3]))
        assert worst < 1e-10


class TestGamma3Expanded:
    def test_koebe_point(self):
        assert abs(gamma3_expanded(2, 2, 2, 2, 2, 2) - 2 / 3) < 1e-15

    def test_zeros(self):
        assert gamma3_expanded(0, 0, 0, 0, 0, 0) == 0

    def test_infeasible_extremal_configuration(self):
        # the quoted equality configuration; its c-triple is not attainable
        # in the class, but the expression value is exactly 7/6
        v = gamma3_expanded(0, 2, 2, 2, 2, 2)
        assert abs(v - 7 / 6) < 1e-15

    def test_route_equivalence(self):
        rng = np.random.default_rng(2)
        z = rng.standard_normal((1000, 6)) + 1j * rng.standard_normal((1000, 6))
        z *= 2
        worst = 0.0
        for row in z:
            c1, c2, c3, p1, p2, p3 = row
            a2, a3, a4 = a234_from_cp(c1, c2, c3, p1, p2, p3)
            direct = a4 - a2 * a3 + a2**3 / 3
            worst = max(worst, abs(direct - gamma3_expanded(c1, c2, c3, p1, p2, p3)))
        assert worst < 1e-12


class TestFeketeSzego:
    def test_koebe(self):
        assert fekete_szego(2, 3) == 1.0

    def test_zero(self):
        assert fekete_szego(0, 0) == 0.0

    def test_is_twice_gamma2(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a2, a3 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            _, g2, _ = gamma_closed(a2, a3, 0)
            assert abs(fekete_szego(a2, a3) - 2 * abs(g2)) < 1e-14


class TestMilin:
    def test_koebe_is_equality_case(self):
        k = koebe(10)
        for n in range(2, 9):
            assert abs(milin_lhs(k, n)) < 1e-13

    def test_identity_function(self):
        f = SchlichtSeries((0, 1, 0, 0, 0))
        assert abs(milin_lhs(f, 2) - (-5 / 2)) < 1e-14

    def test_insufficient_order(self):
        with pytest.raises(ValueError):
            milin_lhs(koebe(4), 4)
        with pytest.raises(ValueError):
            milin_lhs(koebe(10), 1)
