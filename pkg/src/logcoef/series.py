"""Truncated complex power-series algebra.

A series is a finite coefficient vector a_0..a_N; all operations are exact
truncations (no coefficient of index > N is ever read or written), so the
algebra is the quotient ring C[[z]] / z^(N+1) with floating-point complex
coefficients.  This module is the oracle against which the closed-form
coefficient identities elsewhere in the package are checked.
"""

from __future__ import annotations

from dataclasses import dataclass


DEFAULT_ORDER = 16  # every identity below needs only order 4; the larger
                    # default leaves room for the Milin and starlike checks


class OrderMismatchError(ValueError):
    """Two series of different truncation orders were combined."""


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients a_0..a_N of an analytic function, truncated at order N."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> complex:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return mul(self, other)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return div(self, other)

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r})"


class SchlichtSeries(TruncatedSeries):
    """A normalized series: a_0 = 0 and a_1 = 1 exactly."""

    def __post_init__(self):
        super().__post_init__()
        if self.order < 1:
            raise ValueError("a normalized series has order >= 1")
        if self.coeffs[0] != 0 or self.coeffs[1] != 1:
            raise ValueError("normalization requires a0 = 0 and a1 = 1 exactly")


def series(coeffs) -> TruncatedSeries:
    return TruncatedSeries(tuple(coeffs))


def constant(value: complex, order: int) -> TruncatedSeries:
    return TruncatedSeries((complex(value),) + (0j,) * order)


def truncate(a: TruncatedSeries, m: int) -> TruncatedSeries:
    if m > a.order:
        raise ValueError(f"cannot extend order {a.order} series to order {m}")
    return TruncatedSeries(a.coeffs[: m + 1])


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} != {b.order}")
    n = a.order
    out = [0j] * (n + 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            out[i + j] += ai * b.coeffs[j]
    return TruncatedSeries(tuple(out))


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient q with q*b = a up to the truncation order; needs b_0 != 0."""
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} != {b.order}")
    if b.coeffs[0] == 0:
        raise ZeroDivisionError("divisor has zero constant term")
    n = a.order
    q = [0j] * (n + 1)
    inv_b0 = 1 / b.coeffs[0]
    for k in range(n + 1):
        acc = a.coeffs[k]
        for j in range(1, k + 1):
            acc -= b.coeffs[j] * q[k - j]
        q[k] = acc * inv_b0
    return TruncatedSeries(tuple(q))


def log_series(a: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of log(a) for a series with a_0 = 1.

    Solved through the recurrence obtained from L' * a = a' (L_0 = 0):

        L_n = a_n - (1/n) * sum_{j=1..n-1} j * L_j * a_{n-j}

    which costs O(N^2) and avoids term-wise composition.
    """
    if a.coeffs[0] != 1:
        raise ValueError("log requires constant term exactly 1")
    n = a.order
    out = [0j] * (n + 1)
    for k in range(1, n + 1):
        acc = k * a.coeffs[k]
        for j in range(1, k):
            acc -= j * out[j] * a.coeffs[k - j]
        out[k] = acc / k
    return TruncatedSeries(tuple(out))


def exp_series(a: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of exp(a) for a series with a_0 = 0 (inverse of log_series)."""
    if a.coeffs[0] != 0:
        raise ValueError("exp here requires constant term exactly 0")
    n = a.order
    out = [0j] * (n + 1)
    out[0] = 1 + 0j
    for k in range(1, n + 1):
        acc = 0j
        for j in range(1, k + 1):
            acc += j * a.coeffs[j] * out[k - j]
        out[k] = acc / k
    return TruncatedSeries(tuple(out))


def derive(a: TruncatedSeries) -> TruncatedSeries:
    """Formal derivative; drops the order by one."""
    if a.order == 0:
        raise ValueError("cannot differentiate an order-0 series")
    return TruncatedSeries(tuple((n + 1) * a.coeffs[n + 1] for n in range(a.order)))


def koebe(n: int = DEFAULT_ORDER) -> SchlichtSeries:
    """z/(1-z)^2 truncated at order n: coefficients a_k = k."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return SchlichtSeries(tuple(complex(k) for k in range(n + 1)))
