"""Closed-form small-rho coefficient tables for the wavelet variances, the
scale-free limit of the uncertainty product, and its minimization over the
wavelet order, together with numeric residual-order fits against the exact
expansion engine.

Everything in this module that is "stated" (the coefficient tables, the
per-case expansion coefficients) is an independent transcription of closed
formulas; the expansion engine in :mod:`zonalvar.laurent` derives the same
quantities from the defining series.  The verification layer compares the
two and treats the engine as authoritative when they disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .laurent import expand_variances
from .series_s import DEFAULT_TRUNCATION, SeriesTruncation
from .variance import poisson_uncertainty_via_s
from .zonal import poisson_wavelet_spec

__all__ = [
    "ExpansionCase",
    "MinimizationResult",
    "ResidualFit",
    "compare_expansion",
    "denominator_coefficient_table",
    "engine_expansion",
    "f_derivative",
    "f_function",
    "f_sign_probes",
    "limit_uncertainty",
    "minimize_limit_over_order",
    "momentum_numerator_coefficient_table",
    "numerator_coefficient_table",
    "residual_order_check",
    "theorem_expansion",
]

EXPANSION_TARGETS = (
    "var_space_rho2",
    "var_space_rho3",
    "var_momentum_rho_minus2",
    "var_momentum_rho_minus1",
    "product_radicand",
    "product_slope",
)


def _check_nm(n: int, m: int, n_min: int = 2) -> None:
    if n < n_min:
        raise DomainError(f"n must be >= {n_min}")
    if m < 1:
        raise DomainError("m must be >= 1")


def numerator_coefficient_table(n: int, m: int) -> list[Fraction]:
    """Stated leading coefficients of 2^L * A at rho^-L .. rho^(3-L), L = n + 2m.

    The closed forms hold for n >= 5.
    """
    _check_nm(n, m, n_min=5)
    ell = n + 2 * m
    return [
        Fraction(2 * math.factorial(ell - 1), math.factorial(n - 1)),
        Fraction(2 * (n - 1) * math.factorial(ell - 2), math.factorial(n - 2)),
        Fraction(3 * n * n - 7 * n + 6, 3) * Fraction(math.factorial(ell - 3), math.factorial(n - 3)),
        Fraction((n - 1) * (n * n - 3 * n + 4), 3)
        * Fraction(math.factorial(ell - 4), math.factorial(n - 4)),
    ]


def denominator_coefficient_table(n: int, m: int) -> list[Fraction]:
    """Stated leading coefficients of 2^L * B at rho^-L .. rho^(3-L), n >= 5."""
    _check_nm(n, m, n_min=5)
    ell = n + 2 * m
    fact_n1 = math.factorial(n - 1)
    b2_poly = (
        3 * n**4 - 10 * n**3 + (12 * m + 9) * n**2 - (12 * m + 2) * n + 12 * m * (m - 1)
    )
    b3_poly = (
        n**6
        - 7 * n**5
        + (6 * m + 17) * n**4
        - (20 * m + 17) * n**3
        + 6 * (2 * m**2 + m + 1) * n**2
        - 4 * (3 * m - 2) * m * n
        + 8 * (m**2 - 3 * m + 2) * m
    )
    return [
        Fraction(math.factorial(ell - 1), fact_n1),
        Fraction((n * n - n + 2 * m) * math.factorial(ell - 2), fact_n1),
        Fraction(b2_poly * math.factorial(ell - 3), 6 * fact_n1),
        Fraction(b3_poly * math.factorial(ell - 4), 6 * fact_n1),
    ]


def momentum_numerator_coefficient_table(n: int, m: int) -> list[Fraction]:
    """Stated leading coefficients of 2^(L+2) * C at rho^-(L+2), rho^-(L+1), n >= 3."""
    _check_nm(n, m, n_min=3)
    ell = n + 2 * m
    return [
        Fraction(2 * math.factorial(ell + 1), math.factorial(n - 1)),
        Fraction(2 * (n + 1) * math.factorial(ell), math.factorial(n - 2)),
    ]


@dataclass(frozen=True)
class ExpansionCase:
    """Leading expansion coefficients of the variance functionals.

    var_space    = var_space_rho2 rho^2 + var_space_rho3 rho^3 + O(rho^4)
    var_momentum = var_momentum_rho_minus2 rho^-2
                   + var_momentum_rho_minus1 rho^-1 + O(1)
    product      = sqrt(product_radicand) (1 + product_slope rho + O(rho^2))
    """

    case_id: str
    n: int
    m: int
    var_space_rho2: Fraction
    var_space_rho3: Fraction
    var_momentum_rho_minus2: Fraction
    var_momentum_rho_minus1: Fraction
    product_radicand: Fraction
    product_slope: Fraction

    @property
    def coefficients(self) -> dict[str, Fraction]:
        return {name: getattr(self, name) for name in EXPANSION_TARGETS}


def theorem_expansion(n: int, m: int) -> ExpansionCase:
    """The stated per-case expansion coefficients (cases n >= 5 with n = 2,
    n = 3, and n = 4 written separately, as in the source tables)."""
    _check_nm(n, m)
    ell = n + 2 * m
    var_m2 = Fraction(ell * (ell + 1), 4)
    var_m1 = Fraction((n - 1) * m * ell, ell - 1)
    if n == 3:
        case_id = "n=3"
        vs2 = Fraction(1, 2 * m + 1)
        vs3 = Fraction(-2 * (m - 1) * (m + 1) * (m + 5), 3 * (2 * m + 1))
        radicand = Fraction((m + 2) * (2 * m + 3), 2 * (2 * m + 1))
        slope_num = m**5 + 8 * m**4 + 16 * m**3 + 2 * m**2 - 20 * m - 10
        slope = Fraction(-slope_num, 3 * (m + 1) * (m + 2))
    elif n == 4:
        case_id = "n=4"
        vs2 = Fraction(m + 3, 2 * m * m + 5 * m + 3)
        vs3 = Fraction(
            -2 * m * (4 * m * m + 2 * m + 21),
            3 * (2 * m + 3) ** 2 * (2 * m * m + 3 * m + 1),
        )
        radicand = Fraction((m + 3) * (m + 2) * (2 * m + 5), 2 * (m + 1) * (2 * m + 3))
        slope = Fraction(
            -m * (8 * m**3 - 12 * m**2 - 74 * m + 51),
            3 * (m + 3) * (2 * m + 1) * (2 * m + 3) * (2 * m + 5),
        )
    else:
        case_id = "general"
        big_x = n * n - 3 * n + 2 * (m + 1)
        big_y = 3 * n * n - 4 * n * (m + 3) - 4 * m * m + 8 * m + 9
        vs2 = Fraction(n * n - 3 * n + 2 * m + 2, (ell - 1) * (ell - 2))
        vs3 = Fraction(-4 * (n - 1) ** 2 * (n - 3) * m, (ell - 1) ** 2 * (ell - 2) * (ell - 3))
        radicand = Fraction(ell * (ell + 1) * big_x, 4 * (ell - 1) * (ell - 2))
        slope = Fraction(-2 * (n - 1) * m * big_y, (ell - 3) * (ell - 1) * (ell + 1) * big_x)
    return ExpansionCase(case_id, n, m, vs2, vs3, var_m2, var_m1, radicand, slope)


def engine_expansion(n: int, m: int) -> ExpansionCase:
    """The same six coefficients derived by the exact expansion engine."""
    _check_nm(n, m)
    var_space, var_momentum, product = expand_variances(n, m)
    return ExpansionCase(
        "engine",
        n,
        m,
        var_space.coefficient(2),
        var_space.coefficient(3),
        var_momentum.coefficient(-2),
        var_momentum.coefficient(-1),
        product.radicand,
        product.tail.coefficient(1),
    )


def compare_expansion(n: int, m: int) -> dict[str, dict]:
    """Engine-vs-stated comparison of all six expansion coefficients.

    Returns a mapping target -> {engine, stated, match}; values are exact
    Fractions.  The engine side is authoritative.
    """
    stated = theorem_expansion(n, m)
    engine = engine_expansion(n, m)
    out: dict[str, dict] = {}
    for name in EXPANSION_TARGETS:
        ev = getattr(engine, name)
        sv = getattr(stated, name)
        out[name] = {"engine": ev, "stated": sv, "match": ev == sv}
    return out


def limit_uncertainty(n: int, m: int) -> tuple[Fraction, float]:
    """Scale-free limit of the uncertainty product: returns (U_inf^2, U_inf).

    U_inf^2 = L (L+1) (n^2 - 3n + 2(m+1)) / (4 (L-1)(L-2)), L = n + 2m,
    which always lies at or above the bound (n/2)^2.
    """
    _check_nm(n, m)
    ell = n + 2 * m
    radicand = Fraction(ell * (ell + 1) * (n * n - 3 * n + 2 * (m + 1)), 4 * (ell - 1) * (ell - 2))
    return radicand, math.sqrt(radicand)


def f_function(n: int, m):
    """F(m) = 4 U_inf^2 as a function of a real (not necessarily integer)
    order parameter m, exact when m is an int or Fraction.

    Poles sit at m = (1-n)/2 and m = (2-n)/2.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if isinstance(m, (int, Fraction)):
        mq = Fraction(m)
        ell = n + 2 * mq
        den = (ell - 1) * (ell - 2)
        if den == 0:
            raise DomainError(f"F has a pole at m = {mq}")
        return ell * (ell + 1) * (n * n - 3 * n + 2 * (mq + 1)) / den
    ell = n + 2.0 * m
    den = (ell - 1.0) * (ell - 2.0)
    if den == 0.0:
        raise DomainError(f"F has a pole at m = {m}")
    return ell * (ell + 1.0) * (n * n - 3.0 * n + 2.0 * (m + 1.0)) / den


def f_derivative(n: int, m):
    """Stated closed form of dF/dm, exact for rational m."""
    if n < 2:
        raise DomainError("n must be >= 2")
    exact = isinstance(m, (int, Fraction))
    mv = Fraction(m) if exact else float(m)
    den = (n + 2 * mv - 1) ** 2 * (n + 2 * mv - 2) ** 2
    if den == 0:
        raise DomainError(f"F' has a pole at m = {mv}")
    num = (
        16 * mv**4
        + 16 * mv**3 * (2 * n - 3)
        + 4 * mv**2 * (2 * n * n - 2 * n - 5)
        - 4 * mv * (2 * n**3 - 9 * n * n + 13 * n - 6)
        - (n - 2) ** 2 * (3 * n * n - 2 * n - 1)
    )
    if exact:
        return 2 * Fraction(num, den)
    return 2.0 * num / den


_PROBE_OFFSETS = (
    (Fraction(-3, 2), 0),
    (Fraction(-1, 2), -1),
    (Fraction(-1, 2), 0),
    (Fraction(-1, 2), Fraction(3, 4)),
    (Fraction(1, 2), -1),
    (Fraction(1, 2), Fraction(-1, 2)),
)

EXPECTED_PROBE_SIGNS = (1, -1, 1, -1, -1, 1)


def f_sign_probes(n: int) -> list[tuple[Fraction, int]]:
    """Signs of F' at the six probe points m = -3n/2, -n/2 - 1, -n/2,
    -n/2 + 3/4, n/2 - 1, n/2 - 1/2, for n >= 5.

    These six signs pin all four roots of the quartic numerator of F' and
    establish the decrease-then-increase shape on m >= 1.
    """
    if n < 5:
        raise DomainError("the probe table applies for n >= 5")
    probes = []
    for coef, off in _PROBE_OFFSETS:
        mq = coef * n + Fraction(off)
        d = f_derivative(n, mq)
        sign = 0 if d == 0 else (1 if d > 0 else -1)
        probes.append((mq, sign))
    return probes


@dataclass(frozen=True)
class MinimizationResult:
    """Integer order minimizing the scale-free limit for fixed n."""

    n: int
    m_star: int
    radicand: Fraction
    value: float
    scanned_up_to: int


def minimize_limit_over_order(n: int, m_cap: int | None = None) -> MinimizationResult:
    """Scan integer orders m = 1..m_cap for the smallest limit U_inf(n, m).

    The scan checks that the sequence is decreasing up to the minimizer and
    increasing after it, and for n >= 5 verifies the closed-form identities
    m_star = floor((n-1)/2) and 4 U_inf^2(m_star) = n(n-1)(2n-1)/(2n-3).
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if m_cap is None:
        # 4n is past the last critical point of the limit in m, so the
        # scanned window provably contains the global integer minimizer.
        m_cap = 4 * n
    rads = [limit_uncertainty(n, m)[0] for m in range(1, m_cap + 1)]
    m_star = 1 + min(range(len(rads)), key=rads.__getitem__)
    for i in range(len(rads) - 1):
        m = i + 1
        if m < m_star and not rads[i] > rads[i + 1]:
            raise RuntimeError(f"limit not decreasing before m_star at n={n}, m={m}")
        if m >= m_star and not rads[i + 1] > rads[i]:
            raise RuntimeError(f"limit not increasing after m_star at n={n}, m={m}")
    radicand = rads[m_star - 1]
    if n >= 5:
        if m_star != (n - 1) // 2:
            raise RuntimeError(f"minimizer mismatch at n={n}: scan found {m_star}")
        if 4 * radicand != Fraction(n * (n - 1) * (2 * n - 1), 2 * n - 3):
            raise RuntimeError(f"minimal limit identity failed at n={n}")
    return MinimizationResult(n, m_star, radicand, math.sqrt(radicand), m_cap)


_DEFAULT_RESIDUAL_GRID = (0.1, 0.05, 0.025, 0.0125, 0.00625)

_RESIDUAL_FLOOR_ULPS = 32.0


@dataclass(frozen=True)
class ResidualFit:
    """Log-log slope of |numeric - expansion| over a grid of rho values.

    If the expansion captures all terms below order k, the residual scales
    like rho^k and the fitted slope approaches k from below as rho shrinks.
    vacuous is set when a residual sits at the rounding floor of the numeric
    value, in which case the slope carries no information at that point.
    """

    quantity: str
    slope: float
    vacuous: bool
    rhos: tuple[float, ...]
    residuals: tuple[float, ...]


def residual_order_check(
    n: int,
    m: int,
    quantity: str,
    rho_grid: tuple[float, ...] = _DEFAULT_RESIDUAL_GRID,
    trunc: SeriesTruncation = DEFAULT_TRUNCATION,
) -> ResidualFit:
    """Fit the decay order of the residual between the numeric variance
    functionals and the engine expansion truncated at its default window.

    quantity is one of "varS" (expected slope near 4), "varM" (the expansion
    ends at O(1), slope near 0), or "U" (expected slope near 2).
    """
    _check_nm(n, m)
    if quantity not in ("varS", "varM", "U"):
        raise DomainError("quantity must be one of varS, varM, U")
    var_space, var_momentum, product = expand_variances(n, m)
    rhos = []
    residuals = []
    vacuous = False
    for rho in rho_grid:
        result = poisson_uncertainty_via_s(poisson_wavelet_spec(n, m, rho), trunc)
        if quantity == "varS":
            numeric = result.var_space
            predicted = var_space.evaluate(rho)
        elif quantity == "varM":
            numeric = result.var_momentum
            predicted = var_momentum.evaluate(rho)
        else:
            numeric = result.product
            predicted = product.evaluate(rho)
        residual = abs(numeric - predicted)
        floor = _RESIDUAL_FLOOR_ULPS * math.ulp(abs(numeric))
        if residual <= floor:
            vacuous = True
            residual = floor
        rhos.append(rho)
        residuals.append(residual)
    slope = float(np.polyfit(np.log(np.asarray(rhos)), np.log(np.asarray(residuals)), 1)[0])
    return ResidualFit(quantity, slope, vacuous, tuple(rhos), tuple(residuals))
