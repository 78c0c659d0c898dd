"""Quantum mechanics over Q_p and R with quadratic Lagrangians.

The evolution kernel of a quadratic action S(x'', t''; x', t') with mixed
second derivative B(T) (T = t'' - t') has the exact closed form

    K_v = lambda_v(-B/2) |B|_v^(1/2) chi_v(-S),

with the Planck constant set to 1.  At finite places every factor is exact:
the lambda factor is an eighth root of unity, the modulus a power of p and
the phase a rational mod 1, which lets Chapman-Kolmogorov composition be
verified as an identity of exact phases and moduli.

Weyl operators act on step functions: Q(alpha) modulates by chi_p(alpha x),
K(beta) translates by beta, and W(q, k) = chi_p(-qk/2) K(q) Q(k).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .characters import (
    REAL_PLACE,
    Place,
    UnitPhase,
    chi_real,
    lambda_phase,
    lambda_real_phase,
)
from .errors import (
    DegenerateTimeError,
    HalfIntegerObstructionError,
    NotProportionalError,
    NotStabilizedError,
    OutOfDomainError,
    PlaceMismatchError,
    PrimeMismatchError,
    UnknownModelError,
    ZeroFunctionError,
)
from .integrate import BallSpec, StepFunction, gauss_integral_parts, gauss_integral
from .padic import (
    DEFAULT_CONTEXT,
    INF,
    PrecisionContext,
    as_fraction,
    frac_part_fraction,
    series_fraction,
    vp_fraction,
)
from .primes import Prime


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# -- Weyl operators ----------------------------------------------------------


@dataclass(frozen=True)
class PhasePoint:
    """A point (q, k) of the p-adic phase space Q_p x Q_p."""

    p: Prime
    q: Fraction
    k: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        object.__setattr__(self, "q", as_fraction(self.q))
        object.__setattr__(self, "k", as_fraction(self.k))

    def __neg__(self):
        return PhasePoint(self.p, -self.q, -self.k)


@dataclass(frozen=True)
class HWGroupElement:
    """(z, alpha) with the central extension product
    (z, a) (z', a') = (z + z', a + a' + B(z, z')/2), B(z,z') = -k q' + q k'."""

    z: PhasePoint
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))

    def inverse(self) -> "HWGroupElement":
        return HWGroupElement(-self.z, -self.alpha)


def symplectic_form(z1: PhasePoint, z2: PhasePoint) -> Fraction:
    if z1.p != z2.p:
        raise PrimeMismatchError("phase points at different primes")
    return -z1.k * z2.q + z1.q * z2.k


def hw_group_product(g1: HWGroupElement, g2: HWGroupElement) -> HWGroupElement:
    z1, z2 = g1.z, g2.z
    if z1.p != z2.p:
        raise PrimeMismatchError("group elements at different primes")
    z = PhasePoint(z1.p, z1.q + z2.q, z1.k + z2.k)
    return HWGroupElement(z, g1.alpha + g2.alpha + symplectic_form(z1, z2) / 2)


def weyl_q(alpha, psi: StepFunction) -> StepFunction:
    """Position-character operator: (Q(alpha) psi)(x) = chi_p(alpha x) psi(x)."""
    return psi.modulate(as_fraction(alpha))


def weyl_k(beta, psi: StepFunction) -> StepFunction:
    """Translation operator: (K(beta) psi)(x) = psi(x + beta)."""
    return psi.translate(as_fraction(beta))


def weyl_w(z: PhasePoint, psi: StepFunction) -> StepFunction:
    """The Weyl displacement W(q,k) = chi_p(-qk/2) K(q) Q(k).

    At p = 2 the half-angle prefactor -qk/2 must stay in Z_2; otherwise the
    choice of a square root of chi_2 would be a convention, and the operation
    raises HalfIntegerObstructionError instead of picking one.
    """
    if psi.p != z.p:
        raise PrimeMismatchError("state and phase point at different primes")
    half = -z.q * z.k / 2
    if psi.p == 2 and half != 0 and vp_fraction(half, 2) < 0:
        raise HalfIntegerObstructionError(
            f"prefactor -qk/2 = {half} leaves the 2-adic phase lattice"
        )
    pref = UnitPhase(frac_part_fraction(half, psi.p)).value
    return weyl_k(z.q, weyl_q(z.k, psi)) * pref


def weyl_apply(which: str, psi: StepFunction, **params) -> StepFunction:
    """Dispatcher: which in {"Q", "K", "W"} with alpha=, beta= or z=."""
    if which == "Q":
        return weyl_q(params["alpha"], psi)
    if which == "K":
        return weyl_k(params["beta"], psi)
    if which == "W":
        return weyl_w(params["z"], psi)
    raise ValueError(f"unknown Weyl operator {which!r}")


class CommutationResult(NamedTuple):
    phase: UnitPhase  # the constant phase with Q K = phase * K Q
    sign: int  # +1 if phase = chi(alpha beta), -1 if chi(-alpha beta), 0 if both


def commutation_check(alpha, beta, psi: StepFunction) -> CommutationResult:
    """Measure the constant phase between Q(a)K(b) and K(b)Q(a) pointwise.

    The phase is verified on every coset where the state is nonzero and
    matched against chi_p(alpha beta) and chi_p(-alpha beta); as the
    operators are defined here, the realized sign is the minus one.
    """
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if not psi.values:
        raise ZeroFunctionError("commutation check needs a nonzero state")
    p = psi.p
    qk = weyl_q(alpha, weyl_k(beta, psi))
    kq = weyl_k(beta, weyl_q(alpha, psi))
    f, g = qk._common(kq)
    ratio: Optional[complex] = None
    for rep, v in f.values.items():
        w = g.values.get(rep)
        if w is None or abs(w) < 1e-15:
            if abs(v) > 1e-12:
                raise NotProportionalError(f"support mismatch at {rep}")
            continue
        r = v / w
        if ratio is None:
            ratio = r
        elif abs(r - ratio) > 1e-12:
            raise NotProportionalError(f"phase varies across cosets: {ratio} vs {r}")
    if ratio is None:
        raise NotProportionalError("no overlapping support")
    plus = UnitPhase(frac_part_fraction(alpha * beta, p))
    minus = UnitPhase(frac_part_fraction(-alpha * beta, p))
    is_plus = abs(ratio - plus.value) <= 1e-12
    is_minus = abs(ratio - minus.value) <= 1e-12
    if is_plus and is_minus:
        return CommutationResult(plus, 0)
    if is_minus:
        return CommutationResult(minus, -1)
    if is_plus:
        return CommutationResult(plus, 1)
    raise NotProportionalError(f"constant phase {ratio} matches neither sign")


# -- quadratic models --------------------------------------------------------


class ActionCoefficients(NamedTuple):
    """S(x2, x1; T) = A x2^2 + B x2 x1 + C x1^2 + D x2 + E x1 + F."""

    A: object
    B: object
    C: object
    D: object
    E: object
    F: object

    def action(self, x2, x1):
        return (
            self.A * x2 * x2
            + self.B * x2 * x1
            + self.C * x1 * x1
            + self.D * x2
            + self.E * x1
            + self.F
        )


@dataclass(frozen=True)
class QuadraticModel:
    """A quadratic-action model given by closed-form coefficient functions.

    Presets: "free" (also "freeScaleFactor"), "constantField" (parameter a),
    "oscillator" (parameter omega), "deSitter4D" (parameter lam, the
    cosmological linear-term coefficient; lam = 0 degenerates to the free
    scale factor).
    """

    name: str
    params: tuple = ()

    def param(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        if default is None:
            raise UnknownModelError(f"model {self.name} needs parameter {key}")
        return default

    # -- domain ------------------------------------------------------------

    def domain_check(self, place: Place, T) -> None:
        if place.is_finite:
            Tq = as_fraction(T)
            if Tq == 0:
                raise DegenerateTimeError("zero elapsed time")
            if self.name == "oscillator":
                p = place.prime
                if p == 2:
                    raise OutOfDomainError("oscillator excluded at p = 2")
                wT = self.param("omega") * Tq
                if vp_fraction(wT, p) < 1:
                    raise OutOfDomainError(
                        f"oscillator needs |omega T|_p <= 1/p; got v={vp_fraction(wT, p)}"
                    )
            return
        Tf = float(T)
        if Tf == 0.0:
            raise DegenerateTimeError("zero elapsed time")
        if self.name == "oscillator":
            if abs(math.sin(float(self.param("omega")) * Tf)) < 1e-12:
                raise DegenerateTimeError("sin(omega T) vanishes")

    # -- coefficients --------------------------------------------------------

    def coefficients(
        self, place: Place, T, ctx: PrecisionContext = DEFAULT_CONTEXT
    ) -> ActionCoefficients:
        self.domain_check(place, T)
        if self.name in ("free", "freeScaleFactor"):
            return self._free(place, T)
        if self.name in ("constantField", "deSitter4D"):
            key = "a" if self.name == "constantField" else "lam"
            return self._constant_field(place, T, self.param(key))
        if self.name == "oscillator":
            return self._oscillator(place, T, ctx)
        raise UnknownModelError(f"unknown quadratic model {self.name!r}")

    @staticmethod
    def _free(place: Place, T) -> ActionCoefficients:
        if place.is_finite:
            Tq = as_fraction(T)
            half = Fraction(1, 2) / Tq
            return ActionCoefficients(half, -1 / Tq, half, Fraction(0), Fraction(0), Fraction(0))
        Tf = float(T)
        return ActionCoefficients(0.5 / Tf, -1.0 / Tf, 0.5 / Tf, 0.0, 0.0, 0.0)

    @staticmethod
    def _constant_field(place: Place, T, a) -> ActionCoefficients:
        # classical action of acceleration -a:
        # (x2-x1)^2/(2T) - a T (x2+x1)/2 - a^2 T^3 / 24
        if place.is_finite:
            Tq, aq = as_fraction(T), as_fraction(a)
            half = Fraction(1, 2) / Tq
            lin = -aq * Tq / 2
            return ActionCoefficients(
                half, -1 / Tq, half, lin, lin, -aq * aq * Tq ** 3 / 24
            )
        Tf, af = float(T), float(a)
        half = 0.5 / Tf
        lin = -af * Tf / 2
        return ActionCoefficients(half, -1.0 / Tf, half, lin, lin, -af * af * Tf ** 3 / 24)

    def _oscillator(
        self, place: Place, T, ctx: PrecisionContext
    ) -> ActionCoefficients:
        w = self.param("omega")
        if place.is_finite:
            p = place.prime
            wT = as_fraction(w) * as_fraction(T)
            digits = ctx.N + 12  # truncation margin for downstream phases
            sin_wT = series_fraction("sin", wT, p, digits)
            cos_wT = series_fraction("cos", wT, p, digits)
            wq = as_fraction(w)
            half = wq * cos_wT / (2 * sin_wT)
            return ActionCoefficients(
                half, -wq / sin_wT, half, Fraction(0), Fraction(0), Fraction(0)
            )
        wf, Tf = float(w), float(T)
        s, c = math.sin(wf * Tf), math.cos(wf * Tf)
        half = wf * c / (2 * s)
        return ActionCoefficients(half, -wf / s, half, 0.0, 0.0, 0.0)


_MODEL_PARAMS = {
    "free": (),
    "freeScaleFactor": (),
    "constantField": ("a",),
    "oscillator": ("omega",),
    "deSitter4D": ("lam",),
}


def quadratic_model(name: str, **params) -> QuadraticModel:
    """Build a preset model; parameters are exact rationals."""
    if name not in _MODEL_PARAMS:
        raise UnknownModelError(f"unknown quadratic model {name!r}")
    needed = _MODEL_PARAMS[name]
    unknown = set(params) - set(needed)
    if unknown:
        raise UnknownModelError(f"model {name} does not take {sorted(unknown)}")
    items = tuple((k, as_fraction(params[k])) for k in needed if k in params)
    missing = [k for k in needed if k not in params]
    if missing:
        raise UnknownModelError(f"model {name} needs {missing}")
    return QuadraticModel(name, items)


def minisuperspace_model(name: str, **params) -> QuadraticModel:
    """Single-coordinate cosmological presets in the unit-lapse gauge.

    deSitter4D is the constant-field-type action whose linear term carries
    the cosmological constant; freeScaleFactor has no potential at all.
    """
    if name not in ("deSitter4D", "constantField", "freeScaleFactor"):
        raise UnknownModelError(f"unknown minisuperspace model {name!r}")
    if name == "deSitter4D":
        params.setdefault("lam", Fraction(0))
        if params["lam"] == 0:
            return quadratic_model("freeScaleFactor")
    return quadratic_model(name, **params)


# -- propagator --------------------------------------------------------------


@dataclass(frozen=True)
class PropagatorValue:
    """An evolution-kernel value split into exact factors.

    modulus is |B(T)|_v, so |value| = modulus^(1/2); chi_arg is the argument
    -S of the additive character; lambda_ph is the exact eighth-root factor.
    """

    place: Place
    modulus: Union[Fraction, float]
    chi_arg: Union[Fraction, float]
    lambda_ph: UnitPhase

    @property
    def chi_phase(self) -> Union[UnitPhase, complex]:
        if self.place.is_finite:
            return UnitPhase(frac_part_fraction(self.chi_arg, self.place.prime))
        return chi_real(self.chi_arg)

    def total_phase(self) -> UnitPhase:
        """Exact combined phase; finite places only."""
        if not self.place.is_finite:
            raise PlaceMismatchError("total_phase is exact only at finite places")
        return self.lambda_ph * self.chi_phase

    @property
    def value(self) -> complex:
        mag = float(self.modulus) ** 0.5
        if self.place.is_finite:
            return self.total_phase().value * mag
        return self.lambda_ph.value * mag * self.chi_phase


def propagator(
    place: Place,
    model: QuadraticModel,
    x2,
    t2,
    x1,
    t1,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> PropagatorValue:
    """Exact closed-form kernel value K_v(x2, t2; x1, t1)."""
    if place.is_finite:
        T = as_fraction(t2) - as_fraction(t1)
        co = model.coefficients(place, T, ctx)
        if co.B == 0:
            raise DegenerateTimeError("mixed action coefficient vanishes")
        p = place.prime
        s_cl = co.action(as_fraction(x2), as_fraction(x1))
        vB = int(vp_fraction(co.B, p))
        return PropagatorValue(
            place=place,
            modulus=Fraction(1, p ** vB) if vB >= 0 else Fraction(p ** (-vB)),
            chi_arg=-s_cl,
            lambda_ph=lambda_phase(p, -co.B / 2),
        )
    T = float(t2) - float(t1)
    co = model.coefficients(place, T, ctx)
    if co.B == 0:
        raise DegenerateTimeError("mixed action coefficient vanishes")
    s_cl = co.action(float(x2), float(x1))
    return PropagatorValue(
        place=place,
        modulus=abs(co.B),
        chi_arg=-s_cl,
        lambda_ph=lambda_real_phase(-co.B / 2),
    )


def compose_propagators(
    place: Place,
    model: QuadraticModel,
    x2,
    t2,
    x1,
    t1,
    s,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> PropagatorValue:
    """Chapman-Kolmogorov composition through an intermediate time s:
    the y-integral of K(x2,t2; y,s) K(y,s; x1,t1) in closed form.

    All phase pieces stay exact at finite places, so agreement with the
    direct propagator can be asserted as equality of rationals.
    """
    if place.is_finite:
        t2q, t1q, sq = as_fraction(t2), as_fraction(t1), as_fraction(s)
        c2 = model.coefficients(place, t2q - sq, ctx)
        c1 = model.coefficients(place, sq - t1q, ctx)
        x2q, x1q = as_fraction(x2), as_fraction(x1)
        alpha_y = -(c2.C + c1.A)
        beta_y = -(c2.B * x2q + c2.E + c1.B * x1q + c1.D)
        gamma = -(
            c2.A * x2q * x2q
            + c2.D * x2q
            + c2.F
            + c1.C * x1q * x1q
            + c1.E * x1q
            + c1.F
        )
        p = place.prime
        g_phase, g_modexp = gauss_integral_parts(p, alpha_y, beta_y)
        lam = lambda_phase(p, -c2.B / 2) * lambda_phase(p, -c1.B / 2) * g_phase
        vB2 = int(vp_fraction(c2.B, p))
        vB1 = int(vp_fraction(c1.B, p))
        mod_exp = Fraction(-vB2 - vB1, 1) + 2 * g_modexp
        assert mod_exp.denominator == 1
        e = int(mod_exp)
        modulus = Fraction(p) ** e
        return PropagatorValue(place=place, modulus=modulus, chi_arg=gamma, lambda_ph=lam)
    # real place: numeric composition of the same closed forms
    t2f, t1f, sf = float(t2), float(t1), float(s)
    c2 = model.coefficients(place, t2f - sf, ctx)
    c1 = model.coefficients(place, sf - t1f, ctx)
    x2f, x1f = float(x2), float(x1)
    alpha_y = -(c2.C + c1.A)
    beta_y = -(c2.B * x2f + c2.E + c1.B * x1f + c1.D)
    gamma = -(
        c2.A * x2f * x2f + c2.D * x2f + c2.F + c1.C * x1f * x1f + c1.E * x1f + c1.F
    )
    g = gauss_integral(place, alpha_y, beta_y)
    value = (
        lambda_real_phase(-c2.B / 2).value
        * lambda_real_phase(-c1.B / 2).value
        * (abs(c2.B) * abs(c1.B)) ** 0.5
        * g
        * chi_real(gamma)
    )
    direct_mod = abs(value) ** 2
    # reshape into PropagatorValue form: put everything in chi and lambda = 1
    angle = cmath.phase(value) / (2 * math.pi)
    return PropagatorValue(
        place=place,
        modulus=direct_mod,
        chi_arg=-angle,
        lambda_ph=UnitPhase(Fraction(0)),
    )


# -- kernel application ------------------------------------------------------


def _vp_int_of(x: Fraction, p: int) -> int:
    v = vp_fraction(x, p)
    return 0 if v == INF else int(v)


def kernel_apply(
    place: Place,
    model: QuadraticModel,
    t,
    psi: StepFunction,
    ball: BallSpec,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    out_support: Optional[int] = None,
    out_level: Optional[int] = None,
    tol: float = 1e-9,
) -> StepFunction:
    """Apply the evolution kernel to a step function by exact coset sums over
    the ball |y| <= p^R, enlarging R once to confirm stabilization.

    The output grid is sized from the action coefficients so the result is
    genuinely locally constant; NotStabilizedError reports a ball too small
    for the regularized integral to have settled.
    """
    if not place.is_finite:
        raise PlaceMismatchError("kernel_apply works at finite places")
    p = place.prime
    if psi.p != p:
        raise PrimeMismatchError("state and place at different primes")
    T = as_fraction(t)
    co = model.coefficients(place, T, ctx)
    if co.B == 0:
        raise DegenerateTimeError("mixed action coefficient vanishes")

    vB = _vp_int_of(co.B, p)
    v2A = _vp_int_of(2 * co.A, p)
    vA = _vp_int_of(co.A, p)
    M_out = out_support if out_support is not None else max(psi.M, psi.N + vB)
    R0 = max(ball.R, psi.M)

    lam = lambda_phase(p, -co.B / 2).value
    mag = float(p) ** (-vB / 2)

    def compute(R: int) -> StepFunction:
        if out_level is not None:
            N_out = out_level
        else:
            N_out = max(R - vB, M_out - v2A, _ceil_div(-vA, 2), -M_out)
            if co.D != 0:
                N_out = max(N_out, -_vp_int_of(co.D, p))
        out = StepFunction(p, 1, M_out, N_out, {}, _canonical=True)
        side = p ** (M_out + N_out)
        scale_out = Fraction(p) ** M_out
        for kx in range(side):
            x = Fraction(kx) / scale_out
            pref_arg = -(co.A * x * x + co.D * x + co.F)
            bx_e = co.B * x + co.E
            L = max(psi.N, 0)
            if co.C != 0:
                vC = _vp_int_of(co.C, p)
                L = max(L, R - _vp_int_of(2 * co.C, p), _ceil_div(-vC, 2))
            if bx_e != 0:
                L = max(L, -_vp_int_of(bx_e, p))
            acc = 0j
            count = p ** (R + L)
            scale_in = Fraction(p) ** R
            for ky in range(count):
                y = Fraction(ky) / scale_in
                val = psi.evaluate(y)
                if val == 0:
                    continue
                phase = frac_part_fraction(-(co.C * y * y + bx_e * y), p)
                acc += val * UnitPhase(phase).value
            if acc != 0:
                total = (
                    lam
                    * mag
                    * UnitPhase(frac_part_fraction(pref_arg, p)).value
                    * acc
                    * float(p) ** (-L)
                )
                out.values[(x,)] = total
        return out

    first = compute(R0)
    second = compute(R0 + 1)
    if first.max_abs_diff(second) > tol:
        raise NotStabilizedError(
            f"kernel integral changed by more than {tol} when the ball grew"
        )
    return second


class EigenResult(NamedTuple):
    passed: bool
    residual: float


def eigen_check(
    place: Place,
    model: QuadraticModel,
    t,
    psi: StepFunction,
    energy,
    ball: BallSpec,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    tol: float = 1e-9,
) -> EigenResult:
    """Verify U(t) psi = chi_v(E t) psi pointwise within tol."""
    if not psi.values:
        raise ZeroFunctionError("eigen check needs a nonzero state")
    evolved = kernel_apply(place, model, t, psi, ball, ctx)
    phase = UnitPhase(
        frac_part_fraction(as_fraction(energy) * as_fraction(t), place.prime)
    ).value
    residual = evolved.max_abs_diff(psi * phase)
    return EigenResult(residual <= tol, residual)
