"""The noncommutative star product on step functions of d p-adic variables.

The product is the exact double character sum over the Fourier supports of
the factors,

    (f * g)(x) = sum_{k, k'} F(k) G(k') chi_p(-x.(k + k') + (1/2) k theta k'),

with F, G the finite Fourier transforms.  Refinement levels are chosen from
the antisymmetric parameter matrix so every phase is constant on every
enumerated coset, which makes the sum exact; with theta = 0 it collapses to
the pointwise product.

At p = 2 a nonzero theta whose half-phases leave Z_2 would force a choice of
square root of the additive character; the operation refuses with
HalfIntegerObstructionError instead of picking a convention.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .characters import UnitPhase
from .errors import (
    DimensionTooSmallError,
    HalfIntegerObstructionError,
    PrimeMismatchError,
    WindowTooSmallError,
)
from .integrate import StepFunction
from .padic import INF, as_fraction, frac_part_fraction, vp_fraction
from .primes import Prime


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class ThetaMatrix:
    """Antisymmetric noncommutativity parameters theta[i][j] in Q."""

    p: Prime
    d: int
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        if self.d < 2:
            raise DimensionTooSmallError("theta needs at least two coordinates")
        rows = tuple(tuple(as_fraction(v) for v in row) for row in self.entries)
        if len(rows) != self.d or any(len(r) != self.d for r in rows):
            raise ValueError("theta must be a d x d matrix")
        for i in range(self.d):
            if rows[i][i] != 0:
                raise ValueError("theta must vanish on the diagonal")
            for j in range(i + 1, self.d):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("theta must be antisymmetric")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zeros(cls, p, d: int = 2) -> "ThetaMatrix":
        return cls(p, d, tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d)))

    @classmethod
    def d2(cls, p, theta12) -> "ThetaMatrix":
        t = as_fraction(theta12)
        return cls(p, 2, ((Fraction(0), t), (-t, Fraction(0))))

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def min_valuation(self):
        """Smallest valuation among nonzero entries; +inf when theta = 0."""
        vals = [
            vp_fraction(v, self.p) for row in self.entries for v in row if v != 0
        ]
        return min(vals) if vals else INF

    def pair_phase(self, k, kp) -> Fraction:
        """(1/2) sum_ij k_i theta_ij k'_j, the full double sum."""
        total = Fraction(0)
        for i in range(self.d):
            if k[i] == 0:
                continue
            for j in range(self.d):
                t = self.entries[i][j]
                if t != 0 and kp[j] != 0:
                    total += k[i] * t * kp[j]
        return total / 2


def _grid_points(p: int, support_exp: int, level: int, d: int):
    scale = Fraction(p) ** support_exp
    side = [Fraction(k) / scale for k in range(p ** (support_exp + level))]
    return itertools.product(side, repeat=d)


def star_product(f: StepFunction, g: StepFunction, theta: ThetaMatrix) -> StepFunction:
    """Exact star product of two step functions on Q_p^d, d >= 2."""
    if f.p != g.p or f.p != theta.p:
        raise PrimeMismatchError("factors and theta at different primes")
    if f.d != g.d or f.d != theta.d:
        raise ValueError("factors and theta have mismatched dimensions")
    if f.d < 2:
        raise DimensionTooSmallError("star product needs d >= 2")
    p = int(f.p)
    half_cost = 1 if p == 2 else 0
    vtheta = theta.min_valuation()

    F, G = f.fourier(), g.fourier()
    # Fourier support exponents: v(k) >= -f.N on supp F, v(k') >= -g.N on supp G
    if not theta.is_zero():
        obstruction = int(vtheta) - half_cost - f.N - g.N
        if p == 2 and obstruction < 0:
            raise HalfIntegerObstructionError(
                "half-angle phases of theta leave the 2-adic lattice"
            )

    if theta.is_zero():
        shift_f = shift_g = None
    else:
        shift = half_cost - int(vtheta)
        shift_f, shift_g = shift + f.N, shift + g.N

    # output support: both factor bounds intersected
    bound_from_g = g.M if shift_f is None else max(g.M, shift_f)
    bound_from_f = f.M if shift_g is None else max(f.M, shift_g)
    M_out = min(bound_from_f, bound_from_g)
    N_out = max(f.N, g.N, -M_out)

    # integration levels: fine enough for the x-phase and the theta-phase
    L_f = max(F.N, M_out)
    L_g = max(G.N, M_out)
    if not theta.is_zero():
        L_f = max(L_f, half_cost - int(vtheta) + G.M)
        L_g = max(L_g, half_cost - int(vtheta) + F.M)

    wf = float(p) ** (-L_f * f.d)
    wg = float(p) ** (-L_g * g.d)
    f_pts = [
        (k, F.evaluate(k))
        for k in _grid_points(p, F.M, L_f, f.d)
    ]
    f_pts = [(k, v) for k, v in f_pts if v != 0]
    g_pts = [
        (k, G.evaluate(k))
        for k in _grid_points(p, G.M, L_g, g.d)
    ]
    g_pts = [(k, v) for k, v in g_pts if v != 0]

    out = StepFunction(p, f.d, M_out, N_out, {}, _canonical=True)
    pairs = []
    for k, fv in f_pts:
        for kp, gv in g_pts:
            ph = theta.pair_phase(k, kp)
            ksum = tuple(a + b for a, b in zip(k, kp))
            pairs.append((ksum, fv * gv * UnitPhase(frac_part_fraction(ph, p)).value))
    for x in _grid_points(p, M_out, N_out, f.d):
        acc = 0j
        for ksum, coeff in pairs:
            arg = -sum((xi * ki for xi, ki in zip(x, ksum)), Fraction(0))
            acc += coeff * UnitPhase(frac_part_fraction(arg, p)).value
        val = acc * wf * wg
        if abs(val) > 1e-14:
            out.values[x] = val
    return out


def pointwise_product(f: StepFunction, g: StepFunction) -> StepFunction:
    return f * g


def commutator_check(
    alpha, beta, theta: ThetaMatrix, window: StepFunction, tol: float = 1e-9
) -> UnitPhase:
    """Exponentiated commutator of the first two coordinate plane waves.

    Builds the windowed plane waves chi_p(alpha x_1) w and chi_p(beta x_2) w,
    stars them in both orders, and on the cosets where both computations
    reproduce the uncut plane-wave values returns their relative phase, which
    must equal chi_p(alpha beta theta_12).  WindowTooSmallError flags an
    empty agreement region.
    """
    if window.d != theta.d or window.d < 2:
        raise DimensionTooSmallError("window must match theta's dimension (>= 2)")
    if window.p != theta.p:
        raise PrimeMismatchError("window and theta at different primes")
    p = window.p
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    avec = (alpha,) + (Fraction(0),) * (window.d - 1)
    bvec = (Fraction(0), beta) + (Fraction(0),) * (window.d - 2)
    f = window.modulate(avec)
    g = window.modulate(bvec)
    fg = star_product(f, g, theta)
    gf = star_product(g, f, theta)

    t12 = theta.entries[0][1]
    half = alpha * beta * t12 / 2
    base = [alpha * x for x in (1,)]  # placeholder to keep names local

    def uncut(x, sign) -> complex:
        arg = alpha * x[0] + beta * x[1] + sign * half
        return UnitPhase(frac_part_fraction(arg, p)).value

    a_side, b_side = fg._common(gf)
    region = []
    for rep in a_side.values.keys() | b_side.values.keys():
        v1 = a_side.values.get(rep, 0j)
        v2 = b_side.values.get(rep, 0j)
        if abs(v1 - uncut(rep, +1)) <= tol and abs(v2 - uncut(rep, -1)) <= tol:
            region.append((rep, v1, v2))
    if not region:
        raise WindowTooSmallError("no coset reproduces the uncut plane waves")

    expected = UnitPhase(frac_part_fraction(alpha * beta * t12, p))
    for rep, v1, v2 in region:
        if abs(v1 / v2 - expected.value) > tol:
            raise WindowTooSmallError(
                f"relative phase at {rep} is {v1 / v2}, expected {expected.value}"
            )
    return expected
