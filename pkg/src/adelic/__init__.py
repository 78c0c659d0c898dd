"""Exact p-adic and adelic analysis toolkit.

Modules:
    padic       exact p-adic arithmetic, expansions, series
    characters  complex-valued characters and arithmetic factors
    integrate   coset-sum integration, Gauss integrals, Fourier transforms
    adeles      the adele ring, its characters and Schwartz-Bruhat functions
    quantum     Weyl operators and exact quadratic propagators
    strings     crossing-symmetric amplitudes at all places
    moyal       the p-adic star product
    cli         command-line front door
"""

__version__ = "0.1.0"

from .primes import Prime
from .padic import (
    DEFAULT_CONTEXT,
    Ordering,
    PAdicExpansion,
    PAdicRational,
    PrecisionContext,
    definite_integral,
    factorial_series_sum,
    frac_part,
    hensel_sqrt,
    order_compare,
    series_eval,
    valuation_and_norm,
)

__all__ = [
    "Prime",
    "DEFAULT_CONTEXT",
    "Ordering",
    "PAdicExpansion",
    "PAdicRational",
    "PrecisionContext",
    "definite_integral",
    "factorial_series_sum",
    "frac_part",
    "hensel_sqrt",
    "order_compare",
    "series_eval",
    "valuation_and_norm",
]
