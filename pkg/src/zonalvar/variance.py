"""Space variance, momentum variance, and the uncertainty product of zonal
functions, plus a fast S_m-series path specialized to Poisson wavelets.

For a zonal function with coefficient rule f_hat on S^n (lambda = (n-1)/2)
the three coefficient-space sums are

    N = sum_l  lambda/(l+lambda) C(l+n-2, l) f_hat(l)^2
    D = sum_l  C(l+n-1, l) 2 lambda^2 f_hat(l) f_hat(l+1) / ((l+lambda)(l+lambda+1))
    M = sum_l  l lambda (l+2 lambda)/(l+lambda) C(l+n-2, l) f_hat(l)^2

and var_space = (N/D)^2 - 1, var_momentum = M/N.  The difference N - D is
accumulated term by term (each term formed as a relative deviation from the
N term), because at small scale rho the direct difference would cancel to
the rounding floor and the squared ratio would lose most of its digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import BoundViolationError, DegenerateInputError, DomainError, TruncationError
from .series_s import DEFAULT_TRUNCATION, CompensatedSum, SeriesTruncation, _TailStop, s_m_eval
from .zonal import PoissonWaveletSpec, ZonalFunction

__all__ = [
    "UncertaintyResult",
    "poisson_uncertainty_via_s",
    "uncertainty_product",
    "variance_momentum",
    "variance_space",
]

_DENOM_FLOOR = 1e-300
_NEGATIVE_CLAMP = -1e-12
_BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class UncertaintyResult:
    """Variances and their product, with computation diagnostics.

    product equals sqrt(var_space * var_momentum) by construction.
    """

    var_space: float
    var_momentum: float
    product: float
    diagnostics: Mapping[str, object]


def _coefficient_sums(f: ZonalFunction, trunc: SeriesTruncation) -> tuple[float, float, float, dict]:
    """Accumulate (N, N - D, M) for the coefficient rule f.

    Binomial weights are taken from math.comb and converted once per term,
    so the only per-term rounding is the final float conversion.  The N - D
    accumulator forms each term as tN * (1 - ratio) with
    ratio = (l + 2 lambda)/(l + lambda + 1) * f_hat(l+1)/f_hat(l), which keeps
    the difference accurate even when N and D agree to many digits.
    """
    lam = float(f.dim.lam)
    two_lam = 2.0 * lam
    n = f.dim.n
    acc_n = CompensatedSum()
    acc_dd = CompensatedSum()  # N - D
    acc_m = CompensatedSum()
    stop_n = _TailStop(trunc)
    stop_dd = _TailStop(trunc)
    stop_m = _TailStop(trunc)
    done_n = done_dd = done_m = False
    f_curr = f.coeff(0)
    w1 = 1  # C(l+n-2, l), exact integer
    terms = 0
    for l in range(0, trunc.max_terms + 1):
        if l:
            w1 = w1 * (l + n - 2) // l
        f_next = f.coeff(l + 1)
        if not (math.isfinite(f_curr) and math.isfinite(f_next)):
            raise DomainError(f"coefficient rule returned a non-finite value near l={l}")
        w1f = float(w1)
        t_n = (lam / (l + lam)) * w1f * f_curr * f_curr
        if f_curr == 0.0:
            d_term = 0.0
        else:
            ratio = ((l + two_lam) / (l + lam + 1.0)) * (f_next / f_curr)
            d_term = t_n * (1.0 - ratio)
        t_m = l * (l + two_lam) * t_n
        acc_n.add(t_n)
        acc_dd.add(d_term)
        acc_m.add(t_m)
        terms = l + 1
        done_n = done_n or stop_n.done(l, abs(t_n), abs(acc_n.value))
        done_dd = done_dd or stop_dd.done(l, abs(d_term), abs(acc_dd.value))
        done_m = done_m or stop_m.done(l, abs(t_m), abs(acc_m.value))
        if done_n and done_dd and done_m:
            break
        f_curr = f_next
    else:
        raise TruncationError(
            f"coefficient sums for {f.label or 'coefficient rule'} did not settle "
            f"within {trunc.max_terms} terms"
        )
    info = {"terms": terms, "path": "coefficient-sum"}
    return acc_n.value, acc_dd.value, acc_m.value, info


def _space_variance_from_sums(big_n: float, n_minus_d: float, diagnostics: dict) -> float:
    d = big_n - n_minus_d
    if abs(d) < _DENOM_FLOOR:
        raise DegenerateInputError(
            "space-variance denominator vanishes (constant input, or no two "
            "consecutive degrees carry weight)"
        )
    q_minus_1 = n_minus_d / d
    var_s = q_minus_1 * (q_minus_1 + 2.0)
    if var_s < 0.0:
        if var_s < _NEGATIVE_CLAMP:
            raise DegenerateInputError(
                f"space variance evaluated to {var_s}, beyond the negative "
                "rounding band; the coefficient rule is numerically degenerate"
            )
        diagnostics["var_space_clamped"] = var_s
        var_s = 0.0
    return var_s


def variance_space(f: ZonalFunction, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Angular (space) variance of a zonal function about its center of mass."""
    big_n, n_minus_d, _, info = _coefficient_sums(f, trunc)
    return _space_variance_from_sums(big_n, n_minus_d, info)


def variance_momentum(f: ZonalFunction, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Momentum (Laplace-Beltrami) variance of a zonal function."""
    big_n, _, big_m, _ = _coefficient_sums(f, trunc)
    if abs(big_n) < _DENOM_FLOOR:
        raise DegenerateInputError("weighted norm vanishes; all coefficients are zero")
    return big_m / big_n


def _assemble(n: int, var_s: float, var_m: float, diagnostics: dict) -> UncertaintyResult:
    product = math.sqrt(var_s * var_m)
    bound = 0.5 * n
    if product < bound * (1.0 - _BOUND_SLACK):
        raise BoundViolationError(
            f"uncertainty product {product} fell below n/2 = {bound}; "
            "this indicates a numerical defect"
        )
    return UncertaintyResult(var_s, var_m, product, diagnostics)


def uncertainty_product(f: ZonalFunction, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> UncertaintyResult:
    """Both variances and their product from one pass over the coefficient sums."""
    big_n, n_minus_d, big_m, info = _coefficient_sums(f, trunc)
    if abs(big_n) < _DENOM_FLOOR:
        raise DegenerateInputError("weighted norm vanishes; all coefficients are zero")
    var_s = _space_variance_from_sums(big_n, n_minus_d, info)
    var_m = big_m / big_n
    return _assemble(f.dim.n, var_s, var_m, info)


def poisson_uncertainty_via_s(
    spec: PoissonWaveletSpec,
    trunc: SeriesTruncation = DEFAULT_TRUNCATION,
) -> UncertaintyResult:
    """Uncertainty product of the Poisson wavelet through the S_m sums.

    With L = n + 2m and S_k = S_k(rho):

        A = 2/(n-1) S_(2m+1) + S_(2m)
        B = sum_{j=0..m} C(m, j) (S_(m+j+1)/(n-1) + S_(m+j))
        C = 2/(n-1) S_(2m+3) + 3 S_(2m+2) + (n-1) S_(2m+1)

        var_space    = q^2 - 1,  q = e^rho A / (2 B)
        var_momentum = C / A

    q - 1 is assembled as (expm1(rho) A + (A - 2B)) / (2B) where A - 2B is
    computed from its explicit all-negative-term form, so the small-rho
    cancellation between e^rho A and 2B never touches a rounded difference.
    """
    n = spec.dim.n
    m = spec.m
    rho = spec.rho
    diag_terms = 0
    s_vals: dict[int, float] = {}
    for k in range(m, 2 * m + 4):
        d: dict = {}
        s_vals[k] = s_m_eval(n, k, rho, trunc, d)
        diag_terms += d.get("terms", 0)
    inv = 1.0 / (n - 1.0)
    a_val = math.fsum((2.0 * inv * s_vals[2 * m + 1], s_vals[2 * m]))
    b_terms = [
        math.comb(m, j) * (s_vals[m + j + 1] * inv + s_vals[m + j]) for j in range(m + 1)
    ]
    b_val = math.fsum(b_terms)
    # A - 2B with the leading S_(2m+1) cancellation done in exact algebra:
    a_minus_2b = -math.fsum(
        [s_vals[2 * m]]
        + [2.0 * math.comb(m, j) * (s_vals[m + j + 1] * inv + s_vals[m + j]) for j in range(m)]
    )
    if not (a_val > _DENOM_FLOOR and b_val > _DENOM_FLOOR):
        raise DegenerateInputError(
            "S_m sums underflowed to zero; the wavelet is numerically null at this rho"
        )
    c_val = math.fsum(
        (2.0 * inv * s_vals[2 * m + 3], 3.0 * s_vals[2 * m + 2], (n - 1.0) * s_vals[2 * m + 1])
    )
    q_minus_1 = (math.expm1(rho) * a_val + a_minus_2b) / (2.0 * b_val)
    var_s = q_minus_1 * (q_minus_1 + 2.0)
    diagnostics: dict = {"path": "s-series", "terms": diag_terms}
    if var_s < 0.0:
        if var_s < _NEGATIVE_CLAMP:
            raise DegenerateInputError(
                f"space variance evaluated to {var_s} on the S_m path; "
                "the configuration is numerically degenerate"
            )
        diagnostics["var_space_clamped"] = var_s
        var_s = 0.0
    var_m = c_val / a_val
    return _assemble(n, var_s, var_m, diagnostics)
