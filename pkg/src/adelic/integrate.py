"""Integration over Q_p^d by exact coset sums.

Everything reduces to finite sums over canonical coset representatives with
the Haar normalization measure(Z_p^d) = 1.  StepFunction (locally constant,
compactly supported) is the workhorse type: Fourier transforms of step
functions are again finite exact sums, and the regularized ball sums here
are the brute-force oracle against which every closed form in the library is
checked.

Representatives of p^L Z_p inside |x| <= p^R are the canonical digit points
p^(-R) k for 0 <= k < p^(R+L), ordered by k; this fixes iteration order.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

import numpy as np

from .characters import (
    REAL_PLACE,
    Place,
    UnitPhase,
    lambda_phase,
    lambda_real_phase,
)
from .errors import (
    RefinementTooCoarseError,
    ZeroQuadraticCoefficientError,
)
from .padic import as_fraction, frac_part_fraction, vp_fraction
from .primes import Prime

_COSET_CAP = 4_000_000  # refuse to enumerate more representatives than this

Point = tuple[Fraction, ...]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class BallSpec:
    """Integration window: the ball |x| <= p^R refined into cosets of p^L Z_p."""

    p: Prime
    R: int
    L: int

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        if self.R + self.L < 0:
            raise ValueError("BallSpec needs R + L >= 0")


class StepFunction:
    """A locally constant function Q_p^d -> C with compact support.

    Supported inside |x_i| <= p^M, constant on cosets of p^N Z_p^d, stored
    sparsely as canonical coset representative -> value.  M and N may be
    negative; only M + N >= 0 is required.
    """

    __slots__ = ("p", "d", "M", "N", "values")

    def __init__(self, p, d: int, M: int, N: int, values: Mapping, *, _canonical=False):
        self.p = Prime(p)
        self.d = int(d)
        self.M = int(M)
        self.N = int(N)
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if self.M + self.N < 0:
            raise ValueError("StepFunction needs M + N >= 0")
        if _canonical:
            self.values = dict(values)
            return
        canon: dict[Point, complex] = {}
        for rep, val in values.items():
            key = self.canonical_rep(self._as_point(rep))
            if key is None:
                raise ValueError(f"representative {rep} outside the support ball")
            val = complex(val)
            if val != 0:
                canon[key] = canon.get(key, 0j) + val
        self.values = canon

    # -- representatives ---------------------------------------------------

    def _as_point(self, x) -> Point:
        if isinstance(x, tuple):
            pt = tuple(as_fraction(c) for c in x)
        else:
            pt = (as_fraction(x),)
        if len(pt) != self.d:
            raise ValueError(f"point has {len(pt)} coordinates, expected {self.d}")
        return pt

    def _canon_coord(self, r: Fraction):
        scaled = r * Fraction(self.p) ** self.M
        if vp_fraction(scaled, self.p) < 0:
            return None
        mod = self.p ** (self.M + self.N)
        k = scaled.numerator * pow(scaled.denominator, -1, mod) % mod if mod > 1 else 0
        return Fraction(k, self.p ** self.M) if self.M >= 0 else Fraction(
            k * self.p ** (-self.M)
        )

    def canonical_rep(self, point) -> Union[Point, None]:
        pt = self._as_point(point)
        out = []
        for c in pt:
            cc = self._canon_coord(c)
            if cc is None:
                return None
            out.append(cc)
        return tuple(out)

    def grid(self):
        """All canonical representatives of the support ball, in index order."""
        side = [
            Fraction(k) / Fraction(self.p) ** self.M
            for k in range(self.p ** (self.M + self.N))
        ]
        return itertools.product(side, repeat=self.d)

    # -- evaluation and algebra --------------------------------------------

    def evaluate(self, point) -> complex:
        rep = self.canonical_rep(point)
        if rep is None:
            return 0j
        return self.values.get(rep, 0j)

    __call__ = evaluate

    def refine(self, M2: int, N2: int) -> "StepFunction":
        """Re-express on a finer grid (larger support, finer level); exact."""
        if M2 < self.M or N2 < self.N:
            raise ValueError("refine only enlarges the grid")
        # a coset r + p^N Z splits into the finer cosets r + t p^N + p^N2 Z
        step = (
            Fraction(self.p) ** self.N
            if self.N >= 0
            else Fraction(1, self.p ** (-self.N))
        )
        shifts = [Fraction(t) * step for t in range(self.p ** (N2 - self.N))]
        target = StepFunction(self.p, self.d, M2, N2, {}, _canonical=True)
        for rep, val in self.values.items():
            for offs in itertools.product(shifts, repeat=self.d):
                fine = tuple(r + o for r, o in zip(rep, offs))
                key = target.canonical_rep(fine)
                if key is None:
                    raise AssertionError("refined representative left the ball")
                target.values[key] = val
        return target

    def _common(self, other: "StepFunction"):
        if not isinstance(other, StepFunction):
            raise TypeError("expected a StepFunction")
        if self.p != other.p or self.d != other.d:
            raise ValueError("step functions live on different spaces")
        M, N = max(self.M, other.M), max(self.N, other.N)
        return self.refine(M, N), other.refine(M, N)

    def __add__(self, other):
        f, g = self._common(other)
        vals = dict(f.values)
        for k, v in g.values.items():
            vals[k] = vals.get(k, 0j) + v
        vals = {k: v for k, v in vals.items() if v != 0}
        return StepFunction(f.p, f.d, f.M, f.N, vals, _canonical=True)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            f, g = self._common(other)
            vals = {
                k: v * g.values[k] for k, v in f.values.items() if k in g.values
            }
            return StepFunction(f.p, f.d, f.M, f.N, vals, _canonical=True)
        scalar = complex(other)
        vals = {k: v * scalar for k, v in self.values.items()} if scalar != 0 else {}
        return StepFunction(self.p, self.d, self.M, self.N, vals, _canonical=True)

    __rmul__ = __mul__

    def modulate(self, alpha) -> "StepFunction":
        """Multiply by the character chi_p(alpha . x); refines the level so the
        phase is constant on every stored coset."""
        avec = alpha if isinstance(alpha, tuple) else (alpha,)
        avec = tuple(as_fraction(a) for a in avec)
        if len(avec) != self.d:
            raise ValueError("modulation vector has wrong dimension")
        need = 0
        for a in avec:
            va = vp_fraction(a, self.p)
            if va != math.inf:
                need = max(need, -int(va))
        base = self if need <= self.N else self.refine(self.M, need)
        vals = {}
        for rep, val in base.values.items():
            phase = frac_part_fraction(
                sum((a * r for a, r in zip(avec, rep)), Fraction(0)), self.p
            )
            vals[rep] = val * UnitPhase(phase).value
        return StepFunction(base.p, base.d, base.M, base.N, vals, _canonical=True)

    def translate(self, beta) -> "StepFunction":
        """The shifted function x -> f(x + beta); support moves accordingly."""
        bvec = beta if isinstance(beta, tuple) else (beta,)
        bvec = tuple(as_fraction(b) for b in bvec)
        if len(bvec) != self.d:
            raise ValueError("translation vector has wrong dimension")
        M2 = self.M
        for b in bvec:
            vb = vp_fraction(b, self.p)
            if vb != math.inf:
                M2 = max(M2, -int(vb))
        out = StepFunction(self.p, self.d, M2, max(self.N, -M2), {}, _canonical=True)
        for rep, val in self.values.items():
            key = out.canonical_rep(tuple(r - b for r, b in zip(rep, bvec)))
            if key is not None:
                out.values[key] = out.values.get(key, 0j) + val
        out.values = {k: v for k, v in out.values.items() if v != 0}
        return out

    def fourier(self) -> "StepFunction":
        """Exact finite Fourier transform with kernel chi_p(x . y).

        Support exponent and level swap: the transform of an (M, N) function
        is an (N, M) function, and the double transform is f(-y).
        """
        p, d = self.p, self.d
        D = p ** (self.M + self.N)
        weight = float(p) ** (-self.N * d)
        if D == 1:
            val = sum(self.values.values()) * weight
            vals = {(Fraction(0),) * d: val} if val != 0 else {}
            return StepFunction(p, d, self.N, self.M, vals, _canonical=True)
        roots = [cmath.exp(2j * math.pi * t / D) for t in range(D)]
        scale_in = Fraction(self.p) ** self.M
        nonzero = [
            (tuple(int(r * scale_in) for r in rep), val)
            for rep, val in self.values.items()
        ]
        out_scale = Fraction(1, p ** self.N) if self.N >= 0 else Fraction(
            p ** (-self.N)
        )
        vals: dict[Point, complex] = {}
        for j in itertools.product(range(D), repeat=d):
            acc = 0j
            for kvec, val in nonzero:
                t = 0
                for ki, ji in zip(kvec, j):
                    t += ki * ji
                acc += val * roots[t % D]
            if acc != 0:
                vals[tuple(Fraction(ji) * out_scale for ji in j)] = acc * weight
        return StepFunction(p, d, self.N, self.M, vals, _canonical=True)

    def l2_norm_sq(self) -> float:
        """Squared L2 norm under the Haar normalization."""
        w = float(self.p) ** (-self.N * self.d)
        return sum(abs(v) ** 2 for v in self.values.values()) * w

    def max_abs_diff(self, other: "StepFunction") -> float:
        f, g = self._common(other)
        keys = set(f.values) | set(g.values)
        return max(
            (abs(f.values.get(k, 0j) - g.values.get(k, 0j)) for k in keys),
            default=0.0,
        )

    def approx_eq(self, other: "StepFunction", tol: float = 1e-9) -> bool:
        return self.max_abs_diff(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        if self.p != other.p or self.d != other.d:
            return False
        return self.max_abs_diff(other) == 0.0

    def __hash__(self):
        return hash((self.p, self.d, self.M, self.N, len(self.values)))

    def __repr__(self):
        return (
            f"StepFunction(p={int(self.p)}, d={self.d}, M={self.M}, N={self.N}, "
            f"{len(self.values)} nonzero cosets)"
        )

    # -- constructors --------------------------------------------------------

    @classmethod
    def omega(cls, p, d: int = 1) -> "StepFunction":
        """Indicator of Z_p^d, the canonical vacuum window."""
        return cls(p, d, 0, 0, {(Fraction(0),) * d: 1.0})

    @classmethod
    def indicator_ball(cls, p, radius_exp: int, d: int = 1) -> "StepFunction":
        """Indicator of |x_i| <= p^radius_exp."""
        return cls(
            p, d, radius_exp, -radius_exp, {(Fraction(0),) * d: 1.0}
        )

    @classmethod
    def indicator_coset(cls, p, center, level: int, d: int = 1) -> "StepFunction":
        """Indicator of center + p^level Z_p^d, on the tightest grid."""
        pt = center if isinstance(center, tuple) else (center,) * d
        pt = tuple(as_fraction(c) for c in pt)
        M = -level
        for c in pt:
            vc = vp_fraction(c, p)
            if vc != math.inf:
                M = max(M, -int(vc))
        return cls(p, d, M, level, {pt: 1.0})

    def tensor(self, other: "StepFunction") -> "StepFunction":
        """Product function on Q_p^(d1+d2)."""
        if self.p != other.p:
            raise ValueError("tensor factors at different primes")
        M, N = max(self.M, other.M), max(self.N, other.N)
        f, g = self.refine(M, N), other.refine(M, N)
        vals = {
            ra + rb: va * vb
            for ra, va in f.values.items()
            for rb, vb in g.values.items()
        }
        return StepFunction(self.p, f.d + g.d, M, N, vals, _canonical=True)

    @classmethod
    def random(cls, p, d, M, N, rng, density: float = 0.6) -> "StepFunction":
        """Seeded random step function for property tests."""
        side = p ** (M + N)
        vals = {}
        scale = Fraction(p) ** M
        for k in itertools.product(range(side), repeat=d):
            if rng.random() < density:
                vals[tuple(Fraction(ki) / scale for ki in k)] = complex(
                    rng.uniform(-1, 1), rng.uniform(-1, 1)
                )
        return cls(p, d, M, N, vals, _canonical=True)


def ball_reps(p: int, R: int, L: int, d: int = 1):
    """Canonical representatives of p^L Z_p^d inside |x_i| <= p^R."""
    count = p ** (R + L)
    if count ** d > _COSET_CAP:
        raise ValueError(
            f"coset enumeration too large: {count}^{d} representatives"
        )
    side = [Fraction(k, p ** R) if R >= 0 else Fraction(k * p ** (-R)) for k in range(count)]
    return itertools.product(side, repeat=d)


def ball_sum_integrate(
    f, ball: BallSpec, *, d: int = 1, probe_check: bool = True
) -> complex:
    """Integral of f over |x| <= p^R as an exact coset sum at refinement L.

    For a StepFunction the refinement is deepened to its level, making the
    sum exact.  For a callable the caller asserts local constancy at level L;
    a spot check compares probe points inside a few cosets and raises
    RefinementTooCoarseError on disagreement beyond 1e-12.
    """
    p = ball.p
    if isinstance(f, StepFunction):
        if f.p != p:
            raise ValueError("ball and function at different primes")
        L = max(ball.L, f.N)
        func = f.evaluate
        d = f.d
    else:
        L = ball.L
        func = f

    total = 0j
    probes_left = 4 if probe_check and not isinstance(f, StepFunction) else 0
    offset1 = Fraction(p) ** L
    offset2 = offset1 * Fraction(1, p + 1)
    for rep in ball_reps(p, ball.R, L, d):
        arg = rep if d > 1 or isinstance(f, StepFunction) else rep[0]
        val = complex(func(arg))
        if probes_left:
            probes_left -= 1
            for off in (offset1, offset2):
                shifted = (
                    tuple(r + off for r in rep) if d > 1 else rep[0] + off
                )
                other = complex(func(shifted))
                if abs(other - val) > 1e-12:
                    raise RefinementTooCoarseError(
                        f"integrand varies inside a coset at {rep}"
                    )
        total += val
    return total * float(p) ** (-L * d)


def character_ball_integral(p, a, R: int) -> complex:
    """Closed form of the ball integral of chi_p(a x): p^R when |a| <= p^-R,
    else 0 by character orthogonality."""
    p = Prime(p)
    av = as_fraction(a.value if hasattr(a, "value") else a)
    if vp_fraction(av, p) >= R:
        return complex(float(p) ** R)
    return 0j


def _auto_refinement(p: int, alpha: Fraction, beta: Fraction, R: int) -> int:
    va = vp_fraction(alpha, p)
    v2a = vp_fraction(2 * alpha, p)
    L = max(0, R - int(v2a), _ceil_div(-int(va), 2))
    if beta != 0:
        L = max(L, -int(vp_fraction(beta, p)))
    return L


def quadratic_ball_sum(p, alpha, beta, R: int, L: int | None = None) -> complex:
    """Regularized Gauss oracle: the exact coset sum of chi_p(alpha x^2 + beta x)
    over |x| <= p^R.

    The refinement is chosen (or checked) so the quadratic phase is constant
    on every coset, making the sum exact; the integer fast path keeps large
    grids affordable.
    """
    p = Prime(p)
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if alpha == 0:
        raise ZeroQuadraticCoefficientError("quadratic coefficient is zero")
    if L is None:
        L = _auto_refinement(p, alpha, beta, R)
    n = p ** (R + L)
    if n > _COSET_CAP:
        raise ValueError(f"coset enumeration too large: {n} representatives")
    # x = k p^-R:   alpha x^2 + beta x = (A k^2 + B k) / (U p^e)
    f2 = alpha / Fraction(p) ** (2 * R)
    f1 = beta / Fraction(p) ** R
    den = (f2.denominator * f1.denominator) // math.gcd(
        f2.denominator, f1.denominator
    )
    A = f2.numerator * (den // f2.denominator)
    B = f1.numerator * (den // f1.denominator)
    e = vp_fraction(Fraction(den), p)
    e = int(e) if e != math.inf else 0
    pe = p ** e
    if pe == 1:
        return complex(n) * float(p) ** (-L)
    U = den // pe
    Uinv = pow(U, -1, pe)
    Am, Bm = A % pe, B % pe
    cache: dict[int, complex] = {}
    two_pi = 2 * math.pi
    total = 0j
    for k in range(n):
        res = (Am * k * k + Bm * k) % pe
        res = res * Uinv % pe
        z = cache.get(res)
        if z is None:
            z = cmath.exp(2j * math.pi * res / pe)
            cache[res] = z
        total += z
    return total * float(p) ** (-L)


def gauss_stabilization_radius(p, alpha, beta) -> int:
    """Smallest R past which the regularized quadratic ball sum is constant:
    p^R >= max(|beta/2alpha|, p |4alpha|^(-1/2))."""
    v2a = int(vp_fraction(2 * as_fraction(alpha), p))
    r = 1 + _ceil_div(int(vp_fraction(4 * as_fraction(alpha), p)), 2)
    if as_fraction(beta) != 0:
        r = max(r, v2a - int(vp_fraction(as_fraction(beta), p)))
    return max(r, 0)


def gauss_integral_parts(p, alpha, beta):
    """Exact pieces of the finite-place Gauss integral:
    (phase, modulus_exponent) with value = phase * p^modulus_exponent.

    The phase is the lambda factor times chi_p(-beta^2/4alpha), an exact
    root of unity; the modulus is p^(-v(2 alpha)/2).
    """
    p = Prime(p)
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if alpha == 0:
        raise ZeroQuadraticCoefficientError("Gauss integral needs alpha != 0")
    lam = lambda_phase(p, alpha)
    chi = UnitPhase(frac_part_fraction(-beta * beta / (4 * alpha), p))
    # |2 alpha|^(-1/2) = p^(v(2 alpha)/2)
    mod_exp = Fraction(int(vp_fraction(2 * alpha, p)), 2)
    return lam * chi, mod_exp


def gauss_integral(place: Place, alpha, beta) -> complex:
    """Closed form of the full-space character integral of
    chi_v(alpha x^2 + beta x): lambda_v(alpha) |2 alpha|^(-1/2)
    chi_v(-beta^2 / 4 alpha)."""
    if place.is_finite:
        phase, mod_exp = gauss_integral_parts(place.prime, alpha, beta)
        return phase.value * float(place.prime) ** float(mod_exp)
    a, b = float(alpha), float(beta)
    if a == 0:
        raise ZeroQuadraticCoefficientError("Gauss integral needs alpha != 0")
    lam = lambda_real_phase(a).value
    chi = cmath.exp(2j * math.pi * (b * b / (4 * a)))  # chi_inf(-b^2/4a)
    return lam * (2 * abs(a)) ** -0.5 * chi


# -- real-place quadrature oracle -------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _damped_fresnel_quadrature(alpha: float, beta: float, eps: float) -> complex:
    """Numeric integral of chi_inf(alpha x^2 + beta x) e^(-eps x^2) by
    composite Gauss-Legendre panels sized to the local oscillation rate."""
    X = math.sqrt(45.0 / eps)
    rate = 2 * abs(alpha) * X + abs(beta) + 1.0
    h = 2.0 / rate  # a couple of cycles per 16-node panel
    edges = np.arange(-X, X + h, h)
    mids = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    x = mids[:, None] + half[:, None] * _GL_NODES[None, :]
    phase = -2 * math.pi * (alpha * x * x + beta * x)
    vals = np.exp(1j * phase - eps * x * x)
    return complex(np.sum(vals @ _GL_WEIGHTS * half))


def gauss_quadrature_real(
    alpha: float, beta: float, eps_schedule=(0.04, 0.02, 0.01, 0.005, 0.0025)
) -> complex:
    """Richardson-extrapolated Gaussian-damped quadrature for the real-place
    Gauss integral; the independent check of the closed form, good to ~1e-7."""
    vals = [_damped_fresnel_quadrature(alpha, beta, e) for e in eps_schedule]
    table = list(vals)
    k = len(table)
    for j in range(1, k):
        nxt = []
        for i in range(1, len(table)):
            nxt.append((2 ** j * table[i] - table[i - 1]) / (2 ** j - 1))
        table = nxt
    return table[0]
