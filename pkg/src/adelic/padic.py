"""Exact p-adic arithmetic over a rational backing store.

Values are plain rationals tagged with a prime, so valuations, norms and
fractional parts are exact; only series evaluation truncates, and then to a
stated number of digits.  Digit expansions are a derived, precision-bounded
view of the exact value.

Conventions for zero: v_p(0) is +inf (float("inf")), |0|_p = 0, and the zero
expansion has no digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import (
    OutOfConvergenceDomainError,
    PrecisionExhaustedError,
    PrimeMismatchError,
    ZeroArgumentError,
)
from .primes import Prime, tonelli_shanks, vp_int

INF = float("inf")

RationalLike = Union[int, str, Fraction]


@dataclass(frozen=True)
class PrecisionContext:
    """Number of retained digits; modulus p^N for integer-part arithmetic."""

    N: int = 16

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("precision N must be >= 1")


DEFAULT_CONTEXT = PrecisionContext()


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (str, int)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def vp_fraction(x: Fraction, p: int):
    """Valuation of a rational; +inf for zero."""
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    if num % p == 0:
        v = vp_int(num, p)
    if den % p == 0:
        v -= vp_int(den, p)
    return v


def norm_fraction(x: Fraction, p: int) -> Fraction:
    v = vp_fraction(x, p)
    if v == INF:
        return Fraction(0)
    return Fraction(1, p ** v) if v >= 0 else Fraction(p ** (-v))


def frac_part_fraction(x: Fraction, p: int) -> Fraction:
    """Principal part of x: the unique r in [0,1) with p-power denominator
    and x - r p-integral."""
    v = vp_fraction(x, p)
    if v == INF or v >= 0:
        return Fraction(0)
    k = -int(v)
    pk = p ** k
    b = x.denominator // pk  # prime-to-p part of the denominator
    c = x.numerator * pow(b, -1, pk) % pk
    return Fraction(c, pk)


class PAdicRational:
    """A rational number viewed inside Q_p.

    Arithmetic is exact field arithmetic on the backing rational; the prime
    only enters through valuations, norms and digits.
    """

    __slots__ = ("p", "value")

    def __init__(self, p, value: RationalLike):
        object.__setattr__(self, "p", Prime(p))
        object.__setattr__(self, "value", as_fraction(value))

    def __setattr__(self, name, val):  # immutable
        raise AttributeError("PAdicRational is immutable")

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    def valuation(self):
        return vp_fraction(self.value, self.p)

    def norm(self) -> Fraction:
        return norm_fraction(self.value, self.p)

    def frac_part(self) -> Fraction:
        return frac_part_fraction(self.value, self.p)

    def unit_part(self) -> Fraction:
        """x / p^v, a p-adic unit; undefined at zero."""
        if self.value == 0:
            raise ZeroDivisionError("zero has no unit part")
        v = int(self.valuation())
        return self.value / Fraction(self.p) ** v

    def digit(self, i: int) -> int:
        """Digit x_i of the canonical expansion p^m(x_0 + x_1 p + ...)."""
        u = self.unit_part()
        mod = self.p ** (i + 1)
        residue = u.numerator * pow(u.denominator, -1, mod) % mod
        return residue // self.p ** i

    def expansion(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> "PAdicExpansion":
        return PAdicExpansion.from_fraction(self.value, self.p, ctx.N)

    def is_zero(self) -> bool:
        return self.value == 0

    # -- field arithmetic -------------------------------------------------

    def _coerce(self, other) -> "PAdicRational":
        if isinstance(other, PAdicRational):
            if other.p != self.p:
                raise PrimeMismatchError(f"primes differ: {self.p} vs {other.p}")
            return other
        return PAdicRational(self.p, as_fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return PAdicRational(self.p, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return PAdicRational(self.p, self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        return PAdicRational(self.p, o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return PAdicRational(self.p, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.value == 0:
            raise ZeroDivisionError("p-adic division by zero")
        return PAdicRational(self.p, self.value / o.value)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __neg__(self):
        return PAdicRational(self.p, -self.value)

    def inv(self) -> "PAdicRational":
        if self.value == 0:
            raise ZeroDivisionError("p-adic inverse of zero")
        return PAdicRational(self.p, 1 / self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, PAdicRational):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __repr__(self):
        return f"PAdicRational({int(self.p)}, {str(self.value)!r})"


@dataclass(frozen=True)
class PAdicExpansion:
    """Truncated canonical expansion p^m (d_0 + d_1 p + ... + d_{N-1} p^{N-1}).

    d_0 != 0 unless the value is zero, in which case digits is empty.
    """

    p: Prime
    m: int
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if not 0 <= d < self.p:
                raise ValueError(f"digit {d} out of range for p={int(self.p)}")
        if self.digits and self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")

    @classmethod
    def zero(cls, p) -> "PAdicExpansion":
        return cls(Prime(p), 0, ())

    @classmethod
    def from_fraction(cls, x: Fraction, p, N: int) -> "PAdicExpansion":
        p = Prime(p)
        if x == 0:
            return cls.zero(p)
        m = int(vp_fraction(x, p))
        u = x / Fraction(p) ** m
        mod = p ** N
        residue = u.numerator * pow(u.denominator, -1, mod) % mod
        digits = []
        for _ in range(N):
            residue, d = divmod(residue, p)
            digits.append(d)
        return cls(p, m, tuple(digits))

    @property
    def precision(self) -> int:
        return len(self.digits)

    def is_zero(self) -> bool:
        return not self.digits

    def value_fraction(self) -> Fraction:
        """The finite sum the digits denote, as an exact rational."""
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.p + d
        return Fraction(acc) * Fraction(self.p) ** self.m

    def agrees_with(self, x: Fraction) -> bool:
        """True when x matches this expansion modulo p^(m+N)."""
        if self.is_zero():
            return x == 0
        diff = x - self.value_fraction()
        return vp_fraction(diff, self.p) >= self.m + self.precision

    def __str__(self):
        if self.is_zero():
            return f"0 ({int(self.p)}-adic)"
        ds = ",".join(str(d) for d in self.digits)
        return f"({ds})*{int(self.p)}^{self.m}"


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


def valuation_and_norm(x: PAdicRational):
    """Exact (v_p(x), p^-v_p(x)); (+inf, 0) at zero."""
    return x.valuation(), x.norm()


def frac_part(x: PAdicRational) -> Fraction:
    return x.frac_part()


def order_compare(
    x: PAdicRational, y: PAdicRational, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Ordering:
    """Linear order on Q_p: first by norm, then by the first differing digit.

    Smaller norm sorts first; on equal norms the value with the smaller digit
    at the first differing index of the unit-part expansion sorts first.
    Raises PrecisionExhaustedError when the first differing index lies at or
    beyond the precision window.
    """
    if x.p != y.p:
        raise PrimeMismatchError("order_compare needs a common prime")
    if x.value == y.value:
        return Ordering.EQ
    if x.is_zero():
        return Ordering.LT
    if y.is_zero():
        return Ordering.GT
    vx, vy = x.valuation(), y.valuation()
    if vx > vy:  # |x| < |y|
        return Ordering.LT
    if vx < vy:
        return Ordering.GT
    m = int(vx)
    r = int(vp_fraction(x.value - y.value, x.p)) - m
    if r >= ctx.N:
        raise PrecisionExhaustedError(
            f"values agree through {ctx.N} digits; first difference at index {r}"
        )
    return Ordering.LT if x.digit(r) < y.digit(r) else Ordering.GT


def _sqrt_unit_mod(u: Fraction, p: int, N: int) -> Optional[int]:
    """Root of the unit u modulo p^N, or None when u is not a square unit."""
    modN = p ** N
    U = u.numerator * pow(u.denominator, -1, modN) % modN
    if p == 2:
        # a 2-adic unit is a square iff it is 1 mod 8
        if u.numerator * pow(u.denominator, -1, 8) % 8 != 1:
            return None
        w = 1
        for k in range(3, N):
            if (w * w - U) % 2 ** (k + 1):
                w += 2 ** (k - 1)
        return w % modN
    u0 = U % p
    if pow(u0, (p - 1) // 2, p) != 1:
        return None
    w = tonelli_shanks(u0, p)
    # Newton iteration w <- (w + U/w)/2 doubles the correct digit count
    inv2 = pow(2, -1, modN)
    while (w * w - U) % modN:
        w = (w + U * pow(w, -1, modN)) * inv2 % modN
    return w


def hensel_sqrt(
    x: PAdicRational, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Optional[PAdicExpansion]:
    """Square root in Q_p to N digits, or None when x is not a square.

    A nonzero x = p^v u is a square iff v is even and the unit u is a square
    in Z_p*: a quadratic residue mod p for odd p, congruent to 1 mod 8 for
    p = 2.  Of the roots modulo p^N the smaller canonical representative is
    returned, so the result is deterministic.
    """
    if x.is_zero():
        raise ZeroArgumentError("hensel_sqrt needs a nonzero argument")
    v = int(x.valuation())
    if v % 2:
        return None
    w = _sqrt_unit_mod(x.unit_part(), x.p, ctx.N)
    if w is None:
        return None
    modN = x.p ** ctx.N
    w = min(w, modN - w)
    return PAdicExpansion.from_fraction(
        Fraction(w) * Fraction(x.p) ** (v // 2), x.p, ctx.N
    )


_SERIES_KINDS = ("exp", "log1p", "sin", "cos")


def _series_domain_ok(kind: str, v, p: int) -> bool:
    if v == INF:
        return True
    if kind == "log1p":
        return v >= 1
    return v >= 2 if p == 2 else v >= 1


def _exp_like_tail_bound(n_next: int, v: int, p: int) -> Fraction:
    # v_p(k!) <= (k-1)/(p-1), so v_p(x^k/k!) >= k v - (k-1)/(p-1),
    # increasing in k whenever v > 1/(p-1)
    return Fraction(n_next) * v - Fraction(n_next - 1, p - 1)


def _log_tail_bound(n_next: int, v: int, p: int) -> float:
    # v_p(k) <= log_p k
    return n_next * v - math.log(n_next, p)


def series_fraction(kind: str, xq: Fraction, p: int, N: int) -> Fraction:
    """Stabilized partial sum of the named power series, as an exact rational.

    Terms are added until every later term provably sits beyond N digits past
    the leading exponent of the accumulated sum.  The caller is responsible
    for the convergence precondition.
    """
    if kind not in _SERIES_KINDS:
        raise ValueError(f"unknown series kind {kind!r}")
    if xq == 0:
        return Fraction(1) if kind in ("exp", "cos") else Fraction(0)
    v = int(vp_fraction(xq, p))

    if kind == "exp":
        total, term, n = Fraction(1), Fraction(1), 0
        while True:
            n += 1
            term = term * xq / n
            total += term
            if total and _exp_like_tail_bound(n + 1, v, p) >= vp_fraction(total, p) + N:
                return total
    if kind == "log1p":
        total, power, n = Fraction(0), Fraction(1), 0
        while True:
            n += 1
            power *= xq
            total += power / n if n % 2 else -power / n
            if total and _log_tail_bound(n + 1, v, p) >= vp_fraction(total, p) + N:
                return total
    # sin / cos share the alternating factorial structure
    odd = kind == "sin"
    total = xq if odd else Fraction(1)
    term = total
    n = 1 if odd else 0
    while True:
        term = term * xq * xq / ((n + 1) * (n + 2)) * -1
        n += 2
        total += term
        if total and _exp_like_tail_bound(n + 1, v, p) >= vp_fraction(total, p) + N:
            return total


def series_eval(
    kind: str, x: PAdicRational, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> PAdicExpansion:
    """exp, log1p, sin or cos of a p-adic argument, to N digits.

    exp/sin/cos need |x|_p <= 1/p for odd p and |x|_2 <= 1/4; log1p needs
    |x|_p < 1.  Outside these balls the series diverges and
    OutOfConvergenceDomainError is raised.
    """
    if kind not in _SERIES_KINDS:
        raise ValueError(f"unknown series kind {kind!r}")
    v = x.valuation()
    if not _series_domain_ok(kind, v, x.p):
        raise OutOfConvergenceDomainError(
            f"{kind} needs smaller |x|_p; got valuation {v} at p={int(x.p)}"
        )
    total = series_fraction(kind, x.value, x.p, ctx.N)
    return PAdicExpansion.from_fraction(total, x.p, ctx.N)


CoeffSource = Union[Sequence[RationalLike], Callable[[int], RationalLike]]

_INTEGRATE_CAP = 4096
_STABLE_RUN = 8


def definite_integral(
    coeffs: CoeffSource,
    a: PAdicRational,
    b: PAdicRational,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> PAdicExpansion:
    """Termwise antiderivative difference: sum of f_n/(n+1) (b^{n+1} - a^{n+1}).

    A finite coefficient sequence is a polynomial and is summed exactly.  A
    callable n -> f_n is treated as a power series: terms are consumed until
    the valuations of the recent nonzero terms clear the precision window at
    both endpoints and their floor is strictly rising (so a partial sum whose
    own valuation keeps drifting down cannot masquerade as stable);
    OutOfConvergenceDomainError is raised if that never happens within the
    iteration cap.
    """
    if a.p != b.p:
        raise PrimeMismatchError("endpoints at different primes")
    p = a.p
    finite = not callable(coeffs)
    seq = [as_fraction(c) for c in coeffs] if finite else None

    total = Fraction(0)
    pow_b, pow_a = Fraction(1), Fraction(1)
    recent: list = []  # endpoint-min valuations of nonzero terms
    zero_run = 0
    n = 0
    while True:
        if finite and n >= len(seq):
            break
        fn = seq[n] if finite else as_fraction(coeffs(n))
        pow_b *= b.value
        pow_a *= a.value
        total += fn / (n + 1) * (pow_b - pow_a)
        if not finite:
            target = (vp_fraction(total, p) if total else 0) + ctx.N
            if fn == 0:
                zero_run += 1
                if zero_run >= 64 and recent and recent[-1] >= target:
                    break  # effectively a terminated polynomial
            else:
                zero_run = 0
                vb = vp_fraction(fn / (n + 1) * pow_b, p)
                va = vp_fraction(fn / (n + 1) * pow_a, p)
                recent.append(min(va, vb))
                w = _STABLE_RUN
                if len(recent) >= 2 * w:
                    last, prev = recent[-w:], recent[-2 * w : -w]
                    # recent terms must clear the precision target, be on a
                    # rising floor, and sit well above the all-time valuation
                    # minimum; boundary-of-convergence series never manage it
                    floor = min(last)
                    if (
                        floor >= target
                        and floor > min(prev)
                        and floor >= min(recent) + ctx.N + 4
                    ):
                        break
        n += 1
        if not finite and n > _INTEGRATE_CAP:
            raise OutOfConvergenceDomainError(
                "antiderivative series did not stabilize; check |a|_p, |b|_p"
            )
    return PAdicExpansion.from_fraction(total, p, ctx.N)


def factorial_series_sum(
    poly_coeffs: Sequence[int],
    x: PAdicRational,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> PAdicExpansion:
    """Sum of P(n) n! x^n over n >= 0 for |x|_p <= 1.

    Converges on the whole closed unit ball because v_p(n!) grows without
    bound.  Limits with valuation beyond N + 64 are reported as zero.
    """
    if x.valuation() < 0:
        raise OutOfConvergenceDomainError("factorial series needs |x|_p <= 1")
    coeffs = [int(c) for c in poly_coeffs]
    if not any(coeffs):
        return PAdicExpansion.zero(x.p)
    p, v = x.p, x.valuation()
    vx = 0 if v == INF else int(v)
    cap = ctx.N + 64

    def poly(n: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * n + c
        return acc

    total = Fraction(0)
    fact = 1
    power = Fraction(1)
    vfact = 0
    n = 0
    while True:
        total += poly(n) * fact * power
        n += 1
        fact *= n
        vfact += vp_int(n, p)
        power *= x.value
        target = min(cap, (int(vp_fraction(total, p)) if total else cap) + ctx.N)
        if vfact + n * vx >= target:
            break
    if total and vp_fraction(total, p) >= cap:
        return PAdicExpansion.zero(p)
    return PAdicExpansion.from_fraction(total, p, ctx.N)
