"""The adele ring of Q and its complex-valued analysis.

An adele here is a computable stand-in for an element of the restricted
product: a real part, finitely many explicitly stored p-adic components, and
a rational tail value that all remaining components equal.  The tail value
must be a p-adic integer (for ideles, a unit) at every prime outside the
stored support, which keeps the additive character and the norm finite
products.  The principal embedding of q stores components exactly at the
primes dividing its numerator and denominator, with tail value q.

Real Schwartz factors are restricted to the closed catalog of Hermite modes
of the self-dual Gaussian exp(-pi x^2), so every real integral in sight has
a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .characters import UnitPhase, chi_real
from .errors import NotAnIdeleError, UnsupportedRealFactorError
from .integrate import StepFunction
from .padic import PAdicRational, as_fraction, frac_part_fraction, vp_fraction
from .primes import Prime, factorize

RealPart = Union[Fraction, float]


def _tail_ok(tail: Fraction, support: frozenset, unit: bool) -> bool:
    if tail == 0:
        return not unit
    pieces = factorize(tail.numerator) if unit else {}
    pieces = {**pieces, **factorize(tail.denominator)}
    return all(p in support for p in pieces)


class Adele:
    """real part + stored finite components + constant rational tail.

    Components absent from the support are all equal to ``tail_value``,
    which must lie in Z_p for every prime outside the support (integer
    tail).  Equality is semantic: two adeles agree when they agree at the
    real place, on the union of their supports, and in the tail.
    """

    TAIL = "integer"

    __slots__ = ("real", "parts", "tail_value")

    def __init__(self, real: RealPart, parts: Mapping, tail_value=Fraction(0)):
        self.real = real if isinstance(real, float) else as_fraction(real)
        self.parts = {Prime(p): as_fraction(v) for p, v in parts.items()}
        self.tail_value = as_fraction(tail_value)
        self._validate()

    def _validate(self):
        if not _tail_ok(self.tail_value, self.support, unit=False):
            raise ValueError(
                f"tail value {self.tail_value} is not integral outside {set(self.parts)}"
            )

    @property
    def support(self) -> frozenset:
        return frozenset(self.parts)

    def component(self, p) -> Fraction:
        """The p-component, stored or tail."""
        return self.parts.get(Prime(p), self.tail_value)

    def padic_component(self, p) -> PAdicRational:
        return PAdicRational(p, self.component(p))

    @classmethod
    def principal(cls, q) -> "Adele":
        """Diagonal embedding of a rational: components q everywhere,
        stored exactly at the primes of its numerator and denominator."""
        q = as_fraction(q)
        primes = set()
        if q != 0:
            primes |= set(factorize(q.numerator))
        primes |= set(factorize(q.denominator))
        return cls(q, {p: q for p in primes}, tail_value=q)

    def _binary(self, other: "Adele", op) -> "Adele":
        if not isinstance(other, Adele):
            other = Adele.principal(other)
        real = (
            op(self.real, other.real)
            if isinstance(self.real, Fraction) and isinstance(other.real, Fraction)
            else op(float(self.real), float(other.real))
        )
        parts = {
            p: op(self.component(p), other.component(p))
            for p in self.support | other.support
        }
        return Adele(real, parts, op(self.tail_value, other.tail_value))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Adele):
            return NotImplemented
        if self.tail_value != other.tail_value:
            return False
        if isinstance(self.real, Fraction) != isinstance(other.real, Fraction):
            return float(self.real) == float(other.real)
        if self.real != other.real:
            return False
        return all(
            self.component(p) == other.component(p)
            for p in self.support | other.support
        )

    def __hash__(self):
        return hash((self.tail_value, float(self.real)))

    def __repr__(self):
        comps = ", ".join(f"{int(p)}: {v}" for p, v in sorted(self.parts.items()))
        return f"Adele(real={self.real}, {{{comps}}}, tail={self.tail_value})"


class Idele(Adele):
    """An adele with multiplicative tail contract: |x_p| = 1 off the support
    and every component nonzero."""

    TAIL = "unit"

    def _validate(self):
        if self.tail_value == 0 or (isinstance(self.real, Fraction) and self.real == 0) or float(self.real) == 0.0:
            raise NotAnIdeleError("idele components must be nonzero")
        if any(v == 0 for v in self.parts.values()):
            raise NotAnIdeleError("idele components must be nonzero")
        if not _tail_ok(self.tail_value, self.support, unit=True):
            raise NotAnIdeleError(
                f"tail value {self.tail_value} is not a unit outside {set(self.parts)}"
            )

    @classmethod
    def principal(cls, q) -> "Idele":
        q = as_fraction(q)
        if q == 0:
            raise NotAnIdeleError("zero is not an idele")
        primes = set(factorize(q.numerator)) | set(factorize(q.denominator))
        return cls(q, {p: q for p in primes}, tail_value=q)


def embed_principal(q) -> Adele:
    return Adele.principal(q)


def adele_arith(op: str, x: Adele, y: Adele) -> Adele:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown adele operation {op!r}")


def adelic_char(x: Adele) -> complex:
    """The additive character chi(x) = chi_inf(x_real) prod_p chi_p(x_p).

    Tail components are p-adic integers so their factors are exactly 1; the
    finite-place phases are summed as exact rationals before the single
    complex conversion, and a rational real part joins that exact sum.
    """
    phase = Fraction(0)
    for p in x.support:
        phase += frac_part_fraction(x.parts[p], p)
    if isinstance(x.real, Fraction):
        return UnitPhase(phase - x.real).value
    return UnitPhase(phase).value * chi_real(float(x.real))


def adelic_norm(x: Adele, s=1) -> Union[Fraction, complex]:
    """The multiplicative character |x|^s as a finite product.

    Exact (a Fraction) for integer s with a rational real part; complex
    otherwise.  Raises NotAnIdeleError when x violates the idele contract.
    """
    if not isinstance(x, Idele):
        # accept adeles that happen to satisfy the contract
        try:
            x = Idele(x.real, x.parts, x.tail_value)
        except NotAnIdeleError:
            raise
    exact_s = isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1)
    if exact_s and isinstance(x.real, Fraction):
        total = abs(x.real) ** int(s)
        for p, v in x.parts.items():
            total *= (Fraction(1, int(p)) ** int(vp_fraction(v, p))) ** int(s)
        return total
    total = complex(abs(float(x.real))) ** complex(s)
    for p, v in x.parts.items():
        total *= complex(float(p) ** (-int(vp_fraction(v, p)))) ** complex(s)
    return total


# -- real Schwartz catalog ---------------------------------------------------

_SQRT_2PI = math.sqrt(2 * math.pi)


def _hermite_poly(n: int, u: float) -> float:
    h0, h1 = 1.0, 2.0 * u
    if n == 0:
        return h0
    for _ in range(n - 1):
        h0, h1 = h1, 2.0 * u * h1 - 2.0 * (_ + 1) * h0
    return h1


@dataclass(frozen=True)
class RealFactor:
    """A finite combination of Hermite modes of the self-dual Gaussian.

    Mode n is psi_n(x) = 2^(1/4)/sqrt(2^n n!) H_n(sqrt(2 pi) x) exp(-pi x^2),
    an orthonormal family that the Fourier transform with kernel
    exp(-2 pi i x y) multiplies by (-i)^n.  This closed catalog keeps every
    real integral in the library exact.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if not self.coeffs:
            raise UnsupportedRealFactorError("empty real factor")

    @classmethod
    def hermite(cls, n: int) -> "RealFactor":
        if n < 0:
            raise UnsupportedRealFactorError("mode index must be >= 0")
        return cls((0,) * n + (1,))

    @classmethod
    def gaussian(cls) -> "RealFactor":
        # exp(-pi x^2) = 2^(-1/4) psi_0
        return cls((2 ** -0.25,))

    @classmethod
    def from_descriptor(cls, text: str) -> "RealFactor":
        if text == "gauss":
            return cls.gaussian()
        if text.startswith("hermite:"):
            try:
                return cls.hermite(int(text.split(":", 1)[1]))
            except ValueError:
                pass
        raise UnsupportedRealFactorError(f"unknown real factor {text!r}")

    @property
    def descriptor(self) -> str:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        if len(nz) == 1 and self.coeffs[nz[0]] == 1:
            return f"hermite:{nz[0]}"
        return "combo:" + ",".join(repr(c) for c in self.coeffs)

    def evaluate(self, x: float) -> complex:
        u = _SQRT_2PI * x
        damp = math.exp(-math.pi * x * x)
        total = 0j
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            norm = 2 ** 0.25 / math.sqrt(2 ** n * math.factorial(n))
            total += c * norm * _hermite_poly(n, u)
        return total * damp

    def fourier(self) -> "RealFactor":
        return RealFactor(tuple(c * (-1j) ** n for n, c in enumerate(self.coeffs)))

    def inner(self, other: "RealFactor") -> complex:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return sum(x.conjugate() * y for x, y in zip(a, b))

    def __add__(self, other: "RealFactor") -> "RealFactor":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return RealFactor(tuple(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "RealFactor":
        return RealFactor(tuple(complex(c) * x for x in self.coeffs))


class ElementaryFunction:
    """Factorized Schwartz-Bruhat function: a real Hermite-Gaussian factor,
    finitely many step-function factors, and the unit-ball indicator at every
    other prime."""

    __slots__ = ("real_factor", "finite_factors")

    def __init__(self, real_factor: RealFactor, finite_factors: Mapping):
        if not isinstance(real_factor, RealFactor):
            raise UnsupportedRealFactorError(
                "real factor must come from the Hermite-Gaussian catalog"
            )
        self.real_factor = real_factor
        self.finite_factors = {}
        for p, f in finite_factors.items():
            p = Prime(p)
            if not isinstance(f, StepFunction) or f.d != 1:
                raise ValueError("finite factors must be one-dimensional step functions")
            if f.p != p:
                raise ValueError(f"factor at {p} built over prime {f.p}")
            self.finite_factors[p] = f

    @property
    def support(self) -> frozenset:
        return frozenset(self.finite_factors)

    def factor_at(self, p) -> StepFunction:
        return self.finite_factors.get(Prime(p)) or StepFunction.omega(p)

    def evaluate(self, x: Adele) -> complex:
        total = self.real_factor.evaluate(float(x.real))
        for p in self.support | x.support:
            total *= self.factor_at(p).evaluate(x.component(p))
        return total

    def fourier(self) -> "ElementaryFunction":
        """Factorized adelic Fourier transform; the unit-ball tail is self-dual."""
        return ElementaryFunction(
            self.real_factor.fourier(),
            {p: f.fourier() for p, f in self.finite_factors.items()},
        )

    def inner(self, other: "ElementaryFunction") -> complex:
        """L2(A) inner product, conjugate-linear in the first argument."""
        total = self.real_factor.inner(other.real_factor)
        for p in self.support | other.support:
            f, g = self.factor_at(p), other.factor_at(p)
            fr, gr = f._common(g)
            w = float(int(p)) ** (-fr.N)
            acc = 0j
            for rep, v in fr.values.items():
                gv = gr.values.get(rep)
                if gv is not None:
                    acc += v.conjugate() * gv
            total *= acc * w
        return total

    def norm_sq(self) -> float:
        return self.inner(self).real

    def scale(self, c) -> "ElementaryFunction":
        return ElementaryFunction(self.real_factor.scale(c), self.finite_factors)


def adelic_fourier(f: ElementaryFunction) -> ElementaryFunction:
    return f.fourier()


def inner_product(f: ElementaryFunction, g: ElementaryFunction) -> complex:
    return f.inner(g)


@dataclass
class AdelicState:
    """Finite superposition of elementary functions with opaque labels.

    Labels stand in for eigenvalue indices; the library never interprets
    them.  A state flagged normalized must have its coefficient square sum
    within 1e-9 of 1.
    """

    terms: list  # (coefficient: complex, ElementaryFunction, label: str)
    normalized: bool = False

    def __post_init__(self):
        self.terms = [
            (complex(c), f, str(label)) for c, f, label in self.terms
        ]
        if self.normalized:
            total = self.coeff_norm_sq()
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"normalized state has |C|^2 sum {total}")

    def coeff_norm_sq(self) -> float:
        return sum(abs(c) ** 2 for c, _, _ in self.terms)

    def norm_sq(self) -> complex:
        total = 0j
        for ci, fi, _ in self.terms:
            for cj, fj, _ in self.terms:
                total += ci.conjugate() * cj * fi.inner(fj)
        return total

    def fourier(self) -> "AdelicState":
        return AdelicState(
            [(c, f.fourier(), label) for c, f, label in self.terms],
            normalized=self.normalized,
        )
