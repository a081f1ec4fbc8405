"""Exact-rational truncated Laurent series and the asymptotic expansion
engine for the small-rho behaviour of the wavelet variance functionals.

A :class:`TruncatedLaurentSeries` stores finitely many exact ``Fraction``
coefficients on the exponent window [lo, order) together with the promise
that the represented function differs from the stored polynomial by
O(rho^order).  Every arithmetic operation propagates the window honestly:
the result's order is the largest exponent up to which the inputs determine
the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError

__all__ = [
    "NormalizedRadicalSeries",
    "TruncatedLaurentSeries",
    "constant_series",
    "derive_ABC",
    "exp_series",
    "expand_F",
    "expand_s0",
    "expand_sm",
    "expand_variances",
    "monomial",
    "series_arith",
    "sqrt_normalized",
]

RationalLike = Union[int, Fraction]


@dataclass(frozen=True)
class TruncatedLaurentSeries:
    """sum_{e=lo}^{order-1} coeffs[e - lo] rho^e + O(rho^order).

    Invariants: order == lo + len(coeffs); the leading stored coefficient is
    nonzero unless the series is zero on its whole window, in which case
    coeffs is empty and lo == order.  Use :meth:`make` to construct.
    """

    lo: int
    coeffs: tuple[Fraction, ...]
    order: int

    @staticmethod
    def make(
        lo: int,
        coeffs: Iterable[RationalLike],
        order: int | None = None,
    ) -> "TruncatedLaurentSeries":
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = lo + len(cs)
        if order < lo + len(cs):
            raise DomainError("order must cover the supplied coefficients")
        cs.extend([Fraction(0)] * (order - lo - len(cs)))
        while cs and cs[0] == 0:
            cs.pop(0)
            lo += 1
        if not cs:
            lo = order
        return TruncatedLaurentSeries(lo, tuple(cs), order)

    def __post_init__(self) -> None:
        if self.order != self.lo + len(self.coeffs):
            raise DomainError("window invariant violated: order != lo + len(coeffs)")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exponent: int) -> Fraction:
        """Exact coefficient at rho^exponent; exponents at or beyond the
        truncation order are unknown and raise :class:`DomainError`."""
        if exponent >= self.order:
            raise DomainError(
                f"coefficient at rho^{exponent} is beyond the O(rho^{self.order}) tail"
            )
        if exponent < self.lo:
            return Fraction(0)
        return self.coeffs[exponent - self.lo]

    def window_coefficients(self) -> list[tuple[int, Fraction]]:
        """(exponent, coefficient) pairs over [lo, order)."""
        return [(self.lo + i, c) for i, c in enumerate(self.coeffs)]

    def __add__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        order = min(self.order, other.order)
        lo = min(self.lo, other.lo, order)
        cs = [
            self._get(e) + other._get(e) for e in range(lo, order)
        ]
        return TruncatedLaurentSeries.make(lo, cs, order)

    def __sub__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        if self.is_zero or other.is_zero:
            order = min(self.lo + other.order, other.lo + self.order)
            return TruncatedLaurentSeries.make(order, [], order)
        order = min(self.lo + other.order, other.lo + self.order)
        lo = self.lo + other.lo
        length = order - lo
        cs = [Fraction(0)] * length
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            jmax = min(len(other.coeffs), length - i)
            for j in range(jmax):
                cs[i + j] += a * other.coeffs[j]
        return TruncatedLaurentSeries.make(lo, cs, order)

    def __truediv__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        if other.is_zero:
            raise DomainError("division by a series with no known nonzero coefficient")
        order = min(self.order - other.lo, self.lo + other.order - 2 * other.lo)
        lo = self.lo - other.lo
        length = order - lo
        if length <= 0:
            return TruncatedLaurentSeries.make(order, [], order)
        b0 = other.coeffs[0]
        cs: list[Fraction] = []
        for k in range(length):
            a_k = self._get(self.lo + k)
            acc = a_k
            for i in range(k):
                j = k - i
                if j < len(other.coeffs):
                    acc -= cs[i] * other.coeffs[j]
            cs.append(acc / b0)
        return TruncatedLaurentSeries.make(lo, cs, order)

    def _get(self, exponent: int) -> Fraction:
        if self.lo <= exponent < self.order:
            return self.coeffs[exponent - self.lo]
        return Fraction(0)

    def scale(self, factor: RationalLike) -> "TruncatedLaurentSeries":
        q = Fraction(factor)
        if q == 0:
            return TruncatedLaurentSeries.make(self.order, [], self.order)
        return TruncatedLaurentSeries.make(self.lo, [q * c for c in self.coeffs], self.order)

    def shift(self, k: int) -> "TruncatedLaurentSeries":
        """Multiply by rho^k (window shifts rigidly)."""
        return TruncatedLaurentSeries(self.lo + k, self.coeffs, self.order + k)

    def differentiate(self) -> "TruncatedLaurentSeries":
        """d/d rho; the window drops by one exponent on both ends."""
        cs = [Fraction(self.lo + i) * c for i, c in enumerate(self.coeffs)]
        return TruncatedLaurentSeries.make(self.lo - 1, cs, self.order - 1)

    def truncate(self, new_order: int) -> "TruncatedLaurentSeries":
        """Forget coefficients at and beyond new_order."""
        if new_order > self.order:
            raise DomainError("cannot extend a truncated series")
        keep = max(0, new_order - self.lo)
        return TruncatedLaurentSeries.make(min(self.lo, new_order), self.coeffs[:keep], new_order)

    def agrees_with(self, other: "TruncatedLaurentSeries") -> bool:
        """Equality of all coefficients on the common known window."""
        order = min(self.order, other.order)
        lo = min(self.lo, other.lo)
        return all(self._get(e) == other._get(e) for e in range(lo, order))

    def evaluate(self, rho: float) -> float:
        """Numeric value of the stored window at a given rho."""
        if rho <= 0.0:
            raise DomainError("evaluation requires rho > 0")
        return math.fsum(float(c) * rho ** (self.lo + i) for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        if self.is_zero:
            return f"O(rho^{self.order})"
        parts = []
        for e, c in self.window_coefficients():
            if c == 0:
                continue
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*rho^{e}")
        parts.append(f"O(rho^{self.order})")
        return " + ".join(parts)


def constant_series(value: RationalLike, order: int) -> TruncatedLaurentSeries:
    """The constant `value` with an O(rho^order) tail, window [0, order)."""
    if order < 1:
        raise DomainError("a constant needs order >= 1 to be visible")
    return TruncatedLaurentSeries.make(0, [Fraction(value)], order)


def monomial(coefficient: RationalLike, exponent: int, order: int | None = None) -> TruncatedLaurentSeries:
    """coefficient * rho^exponent with window [exponent, order)."""
    if order is None:
        order = exponent + 1
    return TruncatedLaurentSeries.make(exponent, [Fraction(coefficient)], order)


def exp_series(rate: RationalLike, order: int) -> TruncatedLaurentSeries:
    """Taylor window of exp(rate * rho) through O(rho^order)."""
    if order < 1:
        raise DomainError("exp_series needs order >= 1")
    r = Fraction(rate)
    coeffs = [r**j / math.factorial(j) for j in range(order)]
    return TruncatedLaurentSeries.make(0, coeffs, order)


@dataclass(frozen=True)
class NormalizedRadicalSeries:
    """sqrt(radicand) * rho^shift * tail, with tail = 1 + O(rho).

    radicand is an exact positive rational; tail is a truncated series with
    lo == 0 and leading coefficient 1.  This keeps the one genuinely
    irrational number of a square-root expansion isolated in a single
    symbolic factor.
    """

    radicand: Fraction
    shift: int
    tail: TruncatedLaurentSeries

    def __post_init__(self) -> None:
        if self.radicand <= 0:
            raise DomainError("radicand must be positive")
        if self.tail.lo != 0 or self.tail.coefficient(0) != 1:
            raise DomainError("tail must start with constant term 1")

    def squared(self) -> TruncatedLaurentSeries:
        """The exact square, a plain truncated Laurent series."""
        return (self.tail * self.tail).scale(self.radicand).shift(2 * self.shift)

    def evaluate(self, rho: float) -> float:
        return math.sqrt(float(self.radicand)) * rho**self.shift * self.tail.evaluate(rho)

    def __str__(self) -> str:
        prefix = f"sqrt({self.radicand})"
        if self.shift:
            prefix += f"*rho^{self.shift}"
        return f"{prefix} * ({self.tail})"


def sqrt_normalized(series: TruncatedLaurentSeries) -> NormalizedRadicalSeries:
    """Square root of a series with positive leading coefficient and even
    leading exponent, as sqrt(c0) rho^(lo/2) (1 + s1 rho + ...).

    The tail recursion is s_j = (u_j - sum_{i=1}^{j-1} s_i s_{j-i}) / 2
    where u is the input normalized to 1 + u_1 rho + ....
    """
    if series.is_zero:
        raise DomainError("cannot take the square root of an all-unknown series")
    c0 = series.coeffs[0]
    if c0 <= 0:
        raise DomainError("leading coefficient must be positive")
    if series.lo % 2 != 0:
        raise DomainError("leading exponent must be even for a single-valued square root")
    length = series.order - series.lo
    u = [c / c0 for c in series.coeffs]
    s = [Fraction(1)]
    for j in range(1, length):
        acc = u[j]
        for i in range(1, j):
            acc -= s[i] * s[j - i]
        s.append(acc / 2)
    tail = TruncatedLaurentSeries.make(0, s, length)
    return NormalizedRadicalSeries(radicand=c0, shift=series.lo // 2, tail=tail)


_ARITH_BINARY = {"add", "sub", "mul", "div"}


def series_arith(op: str, a: TruncatedLaurentSeries, b=None):
    """Dispatch arithmetic on truncated series.

    op in {add, sub, mul, div} takes two series; "scale" takes a series and
    a rational; "differentiate" and "sqrt_normalized" are unary.
    """
    if op in _ARITH_BINARY:
        if not isinstance(b, TruncatedLaurentSeries):
            raise DomainError(f"op {op!r} needs a second series")
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        return a / b
    if op == "scale":
        if not isinstance(b, (int, Fraction)):
            raise DomainError("scale needs an exact rational factor")
        return a.scale(b)
    if op == "differentiate":
        return a.differentiate()
    if op == "sqrt_normalized":
        return sqrt_normalized(a)
    raise DomainError(f"unknown series operation {op!r}")


def expand_F(order: int) -> TruncatedLaurentSeries:
    """F(rho) = 1 / (1 - exp(-2 rho)) with window [-1, order).

    F has a simple pole of residue 1/2 at rho = 0; the expansion starts
    1/(2 rho) + 1/2 + rho/6 + 0 rho^2 - rho^3/90 + ...

    For order <= -1 the requested window is empty and the all-unknown
    series O(rho^order) is returned (true, since F = Theta(rho^-1)).
    """
    if order <= -1:
        return TruncatedLaurentSeries.make(order, [], order)
    g = constant_series(1, order + 2) - exp_series(-2, order + 2)
    return constant_series(1, order + 1) / g


def expand_s0(n: int, order: int) -> TruncatedLaurentSeries:
    """S_0(rho) = F(rho)^(n-1) with window [-(n-1), order)."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if order <= -(n - 1):
        return TruncatedLaurentSeries.make(order, [], order)
    f = expand_F(order + n - 2)
    result = f
    for _ in range(n - 2):
        result = result * f
    return result


def expand_sm(n: int, m: int, order: int) -> TruncatedLaurentSeries:
    """S_m(rho) = (-1/2 d/d rho)^m S_0(rho) with window [-(n-1+m), order)."""
    if m < 0:
        raise DomainError("m must be >= 0")
    s = expand_s0(n, order + m)
    for _ in range(m):
        s = s.differentiate().scale(Fraction(-1, 2))
    return s


def derive_ABC(
    n: int,
    m: int,
    order: int | None = None,
) -> tuple[TruncatedLaurentSeries, TruncatedLaurentSeries, TruncatedLaurentSeries]:
    """Exact expansions of the three S_m combinations behind the variances:

        A = 2/(n-1) S_(2m+1) + S_(2m)
        B = sum_{j=0..m} C(m, j) (S_(m+j+1)/(n-1) + S_(m+j))
        C = 2/(n-1) S_(2m+3) + 3 S_(2m+2) + (n-1) S_(2m+1)

    With L = n + 2m, the default windows keep exactly the four leading
    coefficients of A and B (orders 4 - L) and the two leading coefficients
    of C (order -L); pass `order` to widen or narrow all three uniformly.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if m < 1:
        raise DomainError("m must be >= 1")
    ell = n + 2 * m
    order_ab = 4 - ell if order is None else order
    order_c = -ell if order is None else order
    inv = Fraction(1, n - 1)

    s_ab = {k: expand_sm(n, k, order_ab) for k in range(m, 2 * m + 2)}
    a_series = s_ab[2 * m + 1].scale(2 * inv) + s_ab[2 * m]
    b_series = s_ab[m].scale(math.comb(m, 0)) + s_ab[m + 1].scale(inv)
    for j in range(1, m + 1):
        cmj = math.comb(m, j)
        b_series = b_series + s_ab[m + j].scale(cmj) + s_ab[m + j + 1].scale(cmj * inv)
    s_c = {k: expand_sm(n, k, order_c) for k in range(2 * m + 1, 2 * m + 4)}
    c_series = (
        s_c[2 * m + 3].scale(2 * inv)
        + s_c[2 * m + 2].scale(3)
        + s_c[2 * m + 1].scale(n - 1)
    )
    return a_series, b_series, c_series


def expand_variances(
    n: int,
    m: int,
) -> tuple[TruncatedLaurentSeries, TruncatedLaurentSeries, NormalizedRadicalSeries]:
    """Exact small-rho expansions of the wavelet variance functionals.

    Returns (var_space, var_momentum, product) where

        var_space    = (e^rho A / (2B))^2 - 1        window [2, 4)
        var_momentum = C / A                         window [-2, 0)
        product      = sqrt(var_space * var_momentum), a normalized radical
                       with tail window [0, 2): U = U0 (1 + slope rho + O(rho^2))

    All coefficients are exact rationals derived from the defining series,
    with no reference to any closed-form coefficient table.
    """
    a_series, b_series, c_series = derive_ABC(n, m)
    e_rho = exp_series(1, 4)
    q = (e_rho * a_series) / b_series.scale(2)
    var_space = q * q - constant_series(1, 4)
    var_momentum = c_series / a_series
    product_sq = var_space * var_momentum
    return var_space, var_momentum, sqrt_normalized(product_sq)
