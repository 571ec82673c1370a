import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcoef import series
from logcoef.series import (
    OrderMismatchError,
    SchlichtSeries,
    TruncatedSeries,
    derive,
    div,
    exp_series,
    koebe,
    log_series,
    mul,
    truncate,
)


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a.coeffs, b.coeffs))


def geometric(n):
    return TruncatedSeries((1,) * (n + 1))


class TestMul:
    def test_difference_of_squares(self):
        a = TruncatedSeries([1, 1, 0, 0])
        b = TruncatedSeries([1, -1, 0, 0])
        assert mul(a, b).coeffs == (1, 0, -1, 0)

    def test_identity_element(self):
        e = TruncatedSeries([1, 0, 0, 0])
        a = TruncatedSeries([2, 3 + 1j, -1, 0.5])
        assert mul(a, e).coeffs == a.coeffs

    def test_geometric_squared(self):
        out = mul(geometric(4), geometric(4))
        assert out.coeffs == (1, 2, 3, 4, 5)

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatchError):
            mul(geometric(3), geometric(4))


class TestDiv:
    def test_geometric(self):
        one = TruncatedSeries([1, 0, 0, 0])
        base = TruncatedSeries([1, -1, 0, 0])
        assert div(one, base).coeffs == (1, 1, 1, 1)

    def test_self_division(self):
        a = TruncatedSeries([2 + 1j, 3, -1, 0.25])
        q = div(a, a)
        assert close(q, TruncatedSeries([1, 0, 0, 0]))

    def test_factorization(self):
        num = TruncatedSeries([1, 0, -1, 0])
        den = TruncatedSeries([1, -1, 0, 0])
        assert close(div(num, den), TruncatedSeries([1, 1, 0, 0]))

    def test_zero_constant_term(self):
        with pytest.raises(ZeroDivisionError):
            div(geometric(3), TruncatedSeries([0, 1, 0, 0]))


class TestLog:
    def test_koebe_log(self):
        # log(1/(1-z)^2) = 2z + z^2 + (2/3) z^3 + (1/2) z^4
        a = TruncatedSeries([1, 2, 3, 4, 5])
        out = log_series(a)
        expected = (0, 2, 1, 2 / 3, 1 / 2)
        assert all(abs(x - y) < 1e-14 for x, y in zip(out.coeffs, expected))

    def test_log_of_one(self):
        out = log_series(TruncatedSeries([1, 0, 0]))
        assert out.coeffs == (0, 0, 0)

    def test_mercator(self):
        out = log_series(TruncatedSeries([1, 1, 0, 0]))
        expected = (0, 1, -1 / 2, 1 / 3)
        assert all(abs(x - y) < 1e-14 for x, y in zip(out.coeffs, expected))

    def test_requires_unit_constant(self):
        with pytest.raises(ValueError):
            log_series(TruncatedSeries([2, 1, 0]))


class TestDerive:
    def test_example(self):
        assert derive(TruncatedSeries([1, 2, 3])).coeffs == (2, 6)

    def test_constant(self):
        assert derive(TruncatedSeries([5, 0, 0])).coeffs == (0, 0)

    def test_koebe_numerator(self):
        assert derive(TruncatedSeries([0, 1, 2, 3])).coeffs == (1, 4, 9)

    def test_order_zero(self):
        with pytest.raises(ValueError):
            derive(TruncatedSeries([1]))

    def test_linearity(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            ca = rng.standard_normal(7) + 1j * rng.standard_normal(7)
            cb = rng.standard_normal(7) + 1j * rng.standard_normal(7)
            al, be = rng.standard_normal(2)
            a, b = TruncatedSeries(ca), TruncatedSeries(cb)
            lhs = derive(TruncatedSeries(al * ca + be * cb))
            rhs = TruncatedSeries(
                tuple(al * x + be * y for x, y in zip(derive(a).coeffs, derive(b).coeffs))
            )
            assert close(lhs, rhs, 1e-14)


class TestKoebe:
    def test_coefficients(self):
        assert koebe(4).coeffs == (0, 1, 2, 3, 4)

    def test_order_one(self):
        assert koebe(1).coeffs == (0, 1)

    def test_gammas_via_log(self):
        k = koebe(12)
        lg = log_series(TruncatedSeries(k.coeffs[1:]))
        for n in range(1, 12):
            assert abs(lg.coeffs[n] / 2 - 1 / n) < 1e-13

    def test_bad_order(self):
        with pytest.raises(ValueError):
            koebe(0)


class TestSchlicht:
    def test_validation(self):
        with pytest.raises(ValueError):
            SchlichtSeries((0, 2, 0))
        with pytest.raises(ValueError):
            SchlichtSeries((1, 1, 0))


def _random_unit_disk(rng, n):
    r = np.sqrt(rng.uniform(0, 1, n))
    a = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * a)


def test_round_trips_bulk():
    # 1000 random series with coefficients in the unit disk
    rng = np.random.default_rng(42)
    worst_log = worst_div = 0.0
    for _ in range(1000):
        tail = _random_unit_disk(rng, 8)
        a = TruncatedSeries((1 + 0j, *tail))
        back = exp_series(log_series(a))
        worst_log = max(worst_log, max(abs(x - y) for x, y in zip(back.coeffs, a.coeffs)))
        b = TruncatedSeries((1.5 + 0j, *_random_unit_disk(rng, 8)))
        back2 = mul(div(a, b), b)
        worst_div = max(worst_div, max(abs(x - y) for x, y in zip(back2.coeffs, a.coeffs)))
    assert worst_log < 1e-12
    assert worst_div < 1e-12


@settings(max_examples=200, deadline=None)
@given(
    st.lists(
        st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
        min_size=2,
        max_size=10,
    )
)
def test_exp_log_round_trip_hypothesis(tail):
    a = TruncatedSeries((1 + 0j, *tail))
    back = exp_series(log_series(a))
    assert all(abs(x - y) < 1e-10 for x, y in zip(back.coeffs, a.coeffs))


def test_truncation_consistency():
    rng = np.random.default_rng(1)
    for _ in range(100):
        ca = 1 + 0j, *_random_unit_disk(rng, 11)
        cb = 1.2 + 0j, *_random_unit_disk(rng, 11)
        a, b = TruncatedSeries(ca), TruncatedSeries(cb)
        m = 5
        am, bm = truncate(a, m), truncate(b, m)
        assert truncate(mul(a, b), m).coeffs == mul(am, bm).coeffs
        assert close(truncate(div(a, b), m), div(am, bm), 1e-13)
        assert truncate(log_series(a), m).coeffs == log_series(am).coeffs
