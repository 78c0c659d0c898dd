"""Complex-valued characters and arithmetic factors on Q_p and R.

Sign conventions: the finite-place additive character is
chi_p(x) = exp(+2 pi i {x}_p) while the real one is
chi_inf(x) = exp(-2 pi i x); with these choices the product of local
characters is trivial on principal adeles.

The quarter-turn factor lambda_v always takes values among eighth roots of
unity, so it is carried as an exact UnitPhase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Optional, Union

from .errors import EvenPrimeError, PlaceMismatchError, ZeroArgumentError
from .padic import PAdicRational, as_fraction, frac_part_fraction, vp_fraction
from .primes import Prime

_EXACT_TURNS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


@dataclass(frozen=True)
class UnitPhase:
    """A point exp(2 pi i q) of the unit circle stored as the exact rational q.

    Multiplying phases adds the rationals mod 1, so products of character
    values never touch floating point.
    """

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q) % 1)

    @classmethod
    def of(cls, q) -> "UnitPhase":
        return cls(as_fraction(q))

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        if not isinstance(other, UnitPhase):
            return NotImplemented
        return UnitPhase(self.q + other.q)

    def __pow__(self, n: int) -> "UnitPhase":
        return UnitPhase(self.q * n)

    def inverse(self) -> "UnitPhase":
        return UnitPhase(-self.q)

    conjugate = inverse

    @property
    def value(self) -> complex:
        exact = _EXACT_TURNS.get(self.q)
        if exact is not None:
            return exact
        return cmath.exp(2j * math.pi * float(self.q))

    def __complex__(self) -> complex:
        return self.value

    def __str__(self):
        return f"e(2πi·{self.q})"


ONE_PHASE = UnitPhase(Fraction(0))


@dataclass(frozen=True)
class Place:
    """A place of Q: the real place or a finite prime."""

    prime: Optional[Prime]

    @classmethod
    def real(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p) -> "Place":
        return cls(Prime(p))

    @classmethod
    def parse(cls, text: str) -> "Place":
        if text in ("inf", "infinity", "real", "oo"):
            return cls.real()
        return cls.finite(int(text))

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def __str__(self):
        return "inf" if self.prime is None else str(int(self.prime))


REAL_PLACE = Place.real()


def _coerce_padic(p: Prime, x) -> PAdicRational:
    if isinstance(x, PAdicRational):
        if x.p != p:
            raise PlaceMismatchError(f"value at prime {x.p}, place wants {p}")
        return x
    return PAdicRational(p, as_fraction(x))


def chi_p(x: PAdicRational) -> UnitPhase:
    """Additive character exp(2 pi i {x}_p), exact."""
    return UnitPhase(x.frac_part())


def chi_real(x) -> complex:
    """Additive character exp(-2 pi i x) of the real place."""
    if isinstance(x, (int, Fraction)):
        return UnitPhase(-as_fraction(x)).value
    return cmath.exp(-2j * math.pi * float(x))


def chi(place: Place, x) -> Union[UnitPhase, complex]:
    """Additive character at a place: exact phase at finite places,
    a complex number at the real place."""
    if place.is_finite:
        return chi_p(_coerce_padic(place.prime, x))
    if isinstance(x, PAdicRational):
        raise PlaceMismatchError("real place got a p-adic value")
    return chi_real(x)


def pi_s(p, x: PAdicRational, s) -> Union[Fraction, complex]:
    """Multiplicative character |x|_p^s; exact when s is an integer."""
    x = _coerce_padic(Prime(p), x)
    if x.is_zero():
        raise ZeroArgumentError("|0|^s undefined for general s")
    v = int(x.valuation())
    if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
        return Fraction(int(x.p)) ** (-v * int(s))
    return complex(int(x.p)) ** (-v * complex(s))


def omega(p, x) -> int:
    """Indicator of the unit ball: 1 iff |x|_p <= 1 (zero included)."""
    x = _coerce_padic(Prime(p), x)
    return 1 if x.valuation() >= 0 else 0


def legendre(a: int, p) -> int:
    """Legendre symbol (a/p) for odd p via Euler's criterion."""
    p = Prime(p)
    if p == 2:
        raise EvenPrimeError("the Legendre symbol needs an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def lambda_phase(p, x) -> UnitPhase:
    """The arithmetic quarter-turn factor of the quadratic character sum at a
    finite place, as an exact eighth root of unity.

    For odd p and x = p^m u it is 1 for even m and the Legendre symbol of the
    unit digit (times i when p = 3 mod 4) for odd m.  For p = 2 it is built
    from the second and third digits of the unit part; the digit reading is
    pinned down by agreement with regularized ball sums of chi_2(x t^2).
    """
    p = Prime(p)
    x = _coerce_padic(p, x)
    if x.is_zero():
        raise ZeroArgumentError("lambda undefined at zero")
    m = int(x.valuation())
    if p != 2:
        if m % 2 == 0:
            return ONE_PHASE
        x0 = x.digit(0)
        ls = legendre(x0, p)
        if p % 4 == 1:
            return UnitPhase(Fraction(0)) if ls == 1 else UnitPhase(Fraction(1, 2))
        quarter = UnitPhase(Fraction(1, 4))  # the factor i
        return quarter if ls == 1 else quarter * UnitPhase(Fraction(1, 2))
    x1, x2 = x.digit(1), x.digit(2)
    phase = UnitPhase(Fraction(1, 8)) if x1 == 0 else UnitPhase(Fraction(7, 8))
    if m % 2 and (x1 + x2) % 2:
        phase = phase * UnitPhase(Fraction(1, 2))
    return phase


def lambda_real_phase(x: float) -> UnitPhase:
    """lambda at the real place: exp(-i pi/4 sign x) on the principal branch."""
    if x == 0:
        raise ZeroArgumentError("lambda undefined at zero")
    return UnitPhase(Fraction(-1, 8)) if x > 0 else UnitPhase(Fraction(1, 8))


def lambda_place_phase(place: Place, x) -> UnitPhase:
    if place.is_finite:
        return lambda_phase(place.prime, x)
    if isinstance(x, PAdicRational):
        raise PlaceMismatchError("real place got a p-adic value")
    return lambda_real_phase(float(x))


def lambda_v(place: Place, x) -> complex:
    """Complex value of the lambda factor at any place; always unit modulus."""
    return lambda_place_phase(place, x).value
