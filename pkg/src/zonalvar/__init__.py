"""Variance functionals and uncertainty products of zonal functions on the
unit n-sphere, specialized fast paths for Poisson multipole wavelets, and an
exact-rational engine for their small-scale asymptotic expansions."""

from .asymptotics import (
    EXPANSION_TARGETS,
    EXPECTED_PROBE_SIGNS,
    ExpansionCase,
    MinimizationResult,
    ResidualFit,
    compare_expansion,
    denominator_coefficient_table,
    engine_expansion,
    f_derivative,
    f_function,
    f_sign_probes,
    limit_uncertainty,
    minimize_limit_over_order,
    momentum_numerator_coefficient_table,
    numerator_coefficient_table,
    residual_order_check,
    theorem_expansion,
)
from .errors import BoundViolationError, DegenerateInputError, DomainError, TruncationError
from .laurent import (
    NormalizedRadicalSeries,
    TruncatedLaurentSeries,
    constant_series,
    derive_ABC,
    exp_series,
    expand_F,
    expand_s0,
    expand_sm,
    expand_variances,
    monomial,
    series_arith,
    sqrt_normalized,
)
from .series_s import DEFAULT_TRUNCATION, SeriesTruncation, s_m_eval, s_m_peak_index, s_m_sum
from .special_functions import (
    SphereDim,
    binomial,
    gamma_half_integer,
    gegenbauer_eval,
    gegenbauer_eval_compensated,
    sphere_dim,
    sphere_surface,
    surface_measure,
)
from .variance import (
    UncertaintyResult,
    poisson_uncertainty_via_s,
    uncertainty_product,
    variance_momentum,
    variance_space,
)
from .zonal import (
    PoissonWaveletSpec,
    ZonalFunction,
    poisson_kernel_coefficients,
    poisson_kernel_eval,
    poisson_wavelet_coefficients,
    poisson_wavelet_spec,
    rescaled_wavelet_coefficients,
    zonal_eval,
)

__version__ = "0.1.0"

__all__ = [
    "BoundViolationError",
    "EXPANSION_TARGETS",
    "EXPECTED_PROBE_SIGNS",
    "DEFAULT_TRUNCATION",
    "DegenerateInputError",
    "DomainError",
    "ExpansionCase",
    "MinimizationResult",
    "NormalizedRadicalSeries",
    "PoissonWaveletSpec",
    "ResidualFit",
    "SeriesTruncation",
    "SphereDim",
    "TruncatedLaurentSeries",
    "TruncationError",
    "UncertaintyResult",
    "ZonalFunction",
    "binomial",
    "compare_expansion",
    "constant_series",
    "denominator_coefficient_table",
    "derive_ABC",
    "engine_expansion",
    "exp_series",
    "expand_F",
    "expand_s0",
    "expand_sm",
    "expand_variances",
    "f_derivative",
    "f_function",
    "f_sign_probes",
    "gamma_half_integer",
    "gegenbauer_eval",
    "gegenbauer_eval_compensated",
    "limit_uncertainty",
    "minimize_limit_over_order",
    "momentum_numerator_coefficient_table",
    "monomial",
    "numerator_coefficient_table",
    "poisson_kernel_coefficients",
    "poisson_kernel_eval",
    "poisson_uncertainty_via_s",
    "poisson_wavelet_coefficients",
    "poisson_wavelet_spec",
    "rescaled_wavelet_coefficients",
    "residual_order_check",
    "s_m_eval",
    "s_m_peak_index",
    "s_m_sum",
    "series_arith",
    "sphere_dim",
    "sphere_surface",
    "sqrt_normalized",
    "surface_measure",
    "theorem_expansion",
    "uncertainty_product",
    "variance_momentum",
    "variance_space",
    "zonal_eval",
]
