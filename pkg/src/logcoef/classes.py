"""Starlike and close-to-convex functions built from positive-real-part data.

A starlike g solves z g' = g p and a close-to-convex f solves z f' = g h,
with p, h ranging over the Carathéodory class.  Building f from atomic
measures keeps class membership structural: there is no analytic condition
left to verify numerically.  Equating coefficients in the two differential
relations gives the recurrences

    n b_n = sum_{k=1..n} b_k p_{n-k}   (p_0 = 1, so b_2 = p_1 exactly)
    n a_n = sum_{k=1..n} b_k c_{n-k}   (c_0 = 1)

and, for the first three coefficients, the closed forms:

    2 a_2 = c_1 + p_1
    3 a_3 = c_2 + c_1 p_1 + (p_1^2 + p_2)/2
    4 a_4 = c_3 + c_2 p_1 + c_1 (p_1^2 + p_2)/2 + p_1^3/6 + p_1 p_2/2 + p_3/3
"""

from __future__ import annotations

from dataclasses import dataclass

from .caratheodory import HerglotzMeasure, herglotz_coefficients
from .series import SchlichtSeries, TruncatedSeries


def starlike_from(p: TruncatedSeries, n: int) -> SchlichtSeries:
    """Coefficients of the starlike function with z g' = g p; needs p_0 = 1."""
    if p.coeffs[0] != 1:
        raise ValueError("p must have constant term exactly 1")
    if p.order < n - 1:
        raise ValueError(f"need p up to order {n - 1}, have {p.order}")
    b = [0j] * (n + 1)
    b[1] = 1 + 0j
    for m in range(2, n + 1):
        acc = 0j
        for k in range(1, m):
            acc += b[k] * p.coeffs[m - k]
        b[m] = acc / (m - 1)
    return SchlichtSeries(tuple(b))


def ctc_from(g: SchlichtSeries, h: TruncatedSeries, n: int) -> SchlichtSeries:
    """Coefficients of the close-to-convex function with z f' = g h; h_0 = 1."""
    if h.coeffs[0] != 1:
        raise ValueError("h must have constant term exactly 1")
    if g.order < n or h.order < n - 1:
        raise ValueError("insufficient input order")
    a = [0j] * (n + 1)
    for m in range(1, n + 1):
        acc = 0j
        for k in range(1, m + 1):
            acc += g.coeffs[k] * (h.coeffs[m - k] if m > k else 1 + 0j)
        a[m] = acc / m
    return SchlichtSeries(tuple(a))


def a234_from_cp(c1, c2, c3, p1, p2, p3):
    """(a_2, a_3, a_4) from the first three coefficients of each factor."""
    a2 = (c1 + p1) / 2
    a3 = (c2 + c1 * p1 + (p1 * p1 + p2) / 2) / 3
    a4 = (c3 + c2 * p1 + c1 * (p1 * p1 + p2) / 2 + p1**3 / 6 + p1 * p2 / 2 + p3 / 3) / 4
    return a2, a3, a4


@dataclass(frozen=True)
class CtcInstance:
    """A constructed close-to-convex function together with its factors."""

    g: SchlichtSeries
    h: TruncatedSeries
    p: TruncatedSeries
    f: SchlichtSeries

    @classmethod
    def from_series(cls, p: TruncatedSeries, h: TruncatedSeries, n: int) -> "CtcInstance":
        g = starlike_from(p, n)
        f = ctc_from(g, h, n)
        return cls(g=g, h=h, p=p, f=f)

    @classmethod
    def from_measures(
        cls, mp: HerglotzMeasure, mh: HerglotzMeasure, n: int
    ) -> "CtcInstance":
        p = TruncatedSeries((1 + 0j,) + herglotz_coefficients(mp, n - 1))
        h = TruncatedSeries((1 + 0j,) + herglotz_coefficients(mh, n - 1))
        return cls.from_series(p, h, n)

    def residuals(self) -> tuple:
        """Max violation of the two convolution identities (diagnostic)."""
        n = self.f.order
        res_g = 0.0
        res_f = 0.0
        for m in range(1, n + 1):
            conv_g = sum(
                self.g.coeffs[k] * (self.p.coeffs[m - k] if m > k else 1 + 0j)
                for k in range(1, m + 1)
            )
            conv_f = sum(
                self.g.coeffs[k] * (self.h.coeffs[m - k] if m > k else 1 + 0j)
                for k in range(1, m + 1)
            )
            res_g = max(res_g, abs(m * self.g.coeffs[m] - conv_g))
            res_f = max(res_f, abs(m * self.f.coeffs[m] - conv_f))
        return res_g, res_f
