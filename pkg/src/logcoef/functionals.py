"""Coefficient functionals: logarithmic coefficients and their closed forms.

The logarithmic coefficients of a normalized f are defined through

    log(f(z)/z) = 2 * sum_{n>=1} gamma_n z^n

so 2*gamma_n is the n-th coefficient of log(f/z).  For n <= 3 they reduce to

    gamma_1 = a_2 / 2
    gamma_2 = (a_3 - a_2^2/2) / 2
    gamma_3 = (a_4 - a_2 a_3 + a_2^3/3) / 2

and the third functional expands, in terms of the factor coefficients, to

    a_4 - a_2 a_3 + a_2^3/3 = c_3/4 + c_2 p_1/12 + c_1 p_2/24 + p_3/12
        + p_1 p_2/24 - c_1 c_2/6 - c_1^2 p_1/24 + c_1^3/24.
"""

from __future__ import annotations

from dataclasses import dataclass

from .series import SchlichtSeries, TruncatedSeries, log_series


@dataclass(frozen=True)
class GammaVector:
    """gamma_1..gamma_N of a normalized function."""

    gammas: tuple

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(complex(g) for g in self.gammas))

    def __getitem__(self, n: int) -> complex:
        """1-indexed: self[n] is gamma_n."""
        if n < 1:
            raise IndexError("gamma indices start at 1")
        return self.gammas[n - 1]

    def __len__(self) -> int:
        return len(self.gammas)


def gamma_vector(f: SchlichtSeries, n: int) -> GammaVector:
    """gamma_1..gamma_n from the series log(f/z); needs f up to order n+1."""
    if f.order < n + 1:
        raise ValueError(f"gamma_{n} needs f up to order {n + 1}, have {f.order}")
    f_over_z = TruncatedSeries(f.coeffs[1 : n + 2])
    lg = log_series(f_over_z)
    return GammaVector(tuple(lg.coeffs[k] / 2 for k in range(1, n + 1)))


def gamma_closed(a2, a3, a4):
    """(gamma_1, gamma_2, gamma_3) from the first three coefficients."""
    g1 = a2 / 2
    g2 = (a3 - a2 * a2 / 2) / 2
    g3 = (a4 - a2 * a3 + a2**3 / 3) / 2
    return g1, g2, g3


def gamma3_expanded(c1, c2, c3, p1, p2, p3):
    """a_4 - a_2 a_3 + a_2^3/3 straight from the factor coefficients."""
    return (
        c3 / 4
        + c2 * p1 / 12
        + c1 * p2 / 24
        + p3 / 12
        + p1 * p2 / 24
        - c1 * c2 / 6
        - c1 * c1 * p1 / 24
        + c1**3 / 24
    )


def fekete_szego(a2, a3) -> float:
    """|a_3 - a_2^2/2|, i.e. twice |gamma_2|."""
    return abs(a3 - a2 * a2 / 2)


def milin_lhs(f: SchlichtSeries, n: int) -> float:
    """The double sum  sum_{m<=n} sum_{k<=m} (k|gamma_k|^2 - 1/k).

    Nonpositive on the whole class S; zero exactly for rotations of the
    extremal function with a_k = k.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    gv = gamma_vector(f, n)
    inner = 0.0
    total = 0.0
    for m in range(1, n + 1):
        inner += m * abs(gv[m]) ** 2 - 1.0 / m
        total += inner
    return total
