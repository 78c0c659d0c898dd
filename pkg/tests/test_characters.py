import cmath
import math
import random
from fractions import Fraction

import pytest

from adelic.characters import (
    REAL_PLACE,
    Place,
    UnitPhase,
    chi,
    chi_p,
    chi_real,
    lambda_phase,
    lambda_place_phase,
    lambda_v,
    legendre,
    omega,
    pi_s,
)
from adelic.errors import EvenPrimeError, PlaceMismatchError, ZeroArgumentError
from adelic.padic import PAdicRational


def pq(p, v):
    return PAdicRational(p, Fraction(v))


class TestUnitPhase:
    def test_group_law_is_exact(self):
        a, b = UnitPhase(Fraction(3, 7)), UnitPhase(Fraction(5, 7))
        assert (a * b).q == Fraction(1, 7)

    def test_quarter_turns_exact(self):
        assert UnitPhase(Fraction(1, 2)).value == -1
        assert UnitPhase(Fraction(1, 4)).value == 1j
        assert UnitPhase(Fraction(0)).value == 1

    def test_inverse(self):
        a = UnitPhase(Fraction(2, 9))
        assert (a * a.inverse()).q == 0

    def test_complex_modulus(self):
        for den in (3, 5, 8, 11):
            z = complex(UnitPhase(Fraction(1, den)))
            assert abs(abs(z) - 1) < 1e-15


class TestChi:
    def test_half_turn(self):
        ph = chi_p(pq(2, Fraction(1, 2)))
        assert ph.q == Fraction(1, 2) and ph.value == -1

    def test_five_ninths(self):
        assert chi_p(pq(3, Fraction(5, 9))).q == Fraction(5, 9)

    def test_trivial_on_integers(self):
        for p in (2, 3, 7):
            for k in (-5, 0, 1, 12):
                assert chi_p(pq(p, k)).q == 0

    def test_additivity_exact(self):
        rng = random.Random(1)
        for _ in range(300):
            p = random.choice([2, 3, 5, 7])
            x = pq(p, Fraction(rng.randint(-99, 99), rng.randint(1, 99)))
            y = pq(p, Fraction(rng.randint(-99, 99), rng.randint(1, 99)))
            assert chi_p(x + y).q == (chi_p(x) * chi_p(y)).q

    def test_real_sign_convention(self):
        assert abs(chi_real(0.25) - (-1j)) < 1e-15
        assert chi_real(Fraction(3, 4)) == 1j

    def test_dispatcher(self):
        assert chi(Place.finite(3), Fraction(5, 9)).q == Fraction(5, 9)
        assert abs(chi(REAL_PLACE, 0.5) + 1) < 1e-15
        with pytest.raises(PlaceMismatchError):
            chi(Place.finite(3), pq(5, 1))
        with pytest.raises(PlaceMismatchError):
            chi(REAL_PLACE, pq(5, 1))


class TestPiS:
    def test_integer_s_exact(self):
        assert pi_s(3, pq(3, Fraction(1, 9)), 2) == 81

    def test_unit_argument(self):
        assert pi_s(5, pq(5, 7), 1j) == 1

    def test_half_power(self):
        got = pi_s(2, pq(2, 8), 0.5)
        assert abs(got - 2 ** -1.5) < 1e-12

    def test_zero_rejected(self):
        with pytest.raises(ZeroArgumentError):
            pi_s(3, pq(3, 0), 1)

    def test_multiplicative(self):
        rng = random.Random(2)
        s = 0.7 + 0.3j
        for _ in range(200):
            p = random.choice([2, 3, 5])
            x = pq(p, Fraction(rng.randint(1, 99), rng.randint(1, 99)))
            y = pq(p, Fraction(rng.randint(1, 99), rng.randint(1, 99)))
            lhs = pi_s(p, x * y, s)
            rhs = pi_s(p, x, s) * pi_s(p, y, s)
            assert abs(lhs - rhs) < 1e-12


class TestOmega:
    def test_values(self):
        assert omega(2, pq(2, 3)) == 1
        assert omega(2, pq(2, Fraction(1, 2))) == 0
        assert omega(7, pq(7, 0)) == 1

    def test_locally_constant(self):
        rng = random.Random(3)
        for _ in range(200):
            p = random.choice([2, 3, 5])
            x = pq(p, Fraction(rng.randint(-50, 50), rng.randint(1, 50)))
            z = pq(p, rng.randint(-20, 20))  # |z|_p <= 1
            assert omega(p, x) == omega(p, x + z) or x.norm() == 1


class TestLegendre:
    def test_examples(self):
        assert legendre(2, 7) == 1  # 3^2 = 2 mod 7
        assert legendre(3, 7) == -1
        assert legendre(14, 7) == 0

    def test_even_prime_rejected(self):
        with pytest.raises(EvenPrimeError):
            legendre(3, 2)

    def test_exhaustive_against_squares(self):
        from adelic.primes import primes_up_to

        for p in primes_up_to(100)[1:]:
            squares = {y * y % p for y in range(1, p)}
            for a in range(p):
                want = 0 if a == 0 else (1 if a in squares else -1)
                assert legendre(a, p) == want


class TestLambda:
    def test_unit_at_odd_primes(self):
        for p in (3, 5, 7, 13):
            assert lambda_v(Place.finite(p), pq(p, 1)) == 1

    def test_lambda5_of_10(self):
        # m=1 odd, p=5=1 mod 4, unit digit 2 is a non-residue
        assert lambda_v(Place.finite(5), pq(5, 10)) == -1

    def test_lambda3_of_3(self):
        assert lambda_v(Place.finite(3), pq(3, 3)) == 1j

    def test_lambda2_values(self):
        s = 1 / math.sqrt(2)
        want = {
            1: complex(s, s),       # unit, digit1 = 0
            3: complex(s, -s),      # digit1 = 1, m even
            2: complex(s, s),       # m odd, unit 1: digits (1,0,0)
            6: complex(-s, s),      # m odd, unit 3: digits (1,1,0) -> sign flip
        }
        for x, w in want.items():
            got = lambda_v(Place.finite(2), pq(2, x))
            assert abs(got - w) < 1e-12, x

    def test_real_place(self):
        assert abs(lambda_v(REAL_PLACE, 1.0) - cmath.exp(-1j * math.pi / 4)) < 1e-15
        assert abs(lambda_v(REAL_PLACE, -2.5) - cmath.exp(1j * math.pi / 4)) < 1e-15

    def test_zero_rejected(self):
        with pytest.raises(ZeroArgumentError):
            lambda_v(Place.finite(3), pq(3, 0))
        with pytest.raises(ZeroArgumentError):
            lambda_v(REAL_PLACE, 0.0)

    @staticmethod
    def _random_nonzero(rng, place):
        if place.is_finite:
            p = place.prime
            while True:
                val = Fraction(rng.randint(-200, 200), rng.randint(1, 200))
                if val:
                    return pq(p, val)
        while True:
            val = rng.uniform(-10, 10)
            if abs(val) > 1e-3:
                return val

    def test_identity_suite(self):
        places = [REAL_PLACE] + [Place.finite(p) for p in (2, 3, 5, 7, 13)]
        rng = random.Random(0)
        for place in places:
            for _ in range(500):
                x = self._random_nonzero(rng, place)
                y = self._random_nonzero(rng, place)
                lx = lambda_place_phase(place, x)
                ly = lambda_place_phase(place, y)
                assert abs(abs(lx.value) - 1) < 1e-12
                # lambda(a^2 x) = lambda(x)
                if place.is_finite:
                    a = pq(place.prime, Fraction(rng.randint(1, 50), rng.randint(1, 50)))
                    if not a.is_zero():
                        assert lambda_place_phase(place, a * a * x).q == lx.q
                else:
                    a = rng.uniform(0.1, 5)
                    assert lambda_place_phase(place, a * a * x).q == lx.q
                # lambda(x) lambda(-x) = 1
                assert (lx * lambda_place_phase(place, -x)).q == 0
                # cocycle: lambda(x)lambda(y) = lambda(x+y) lambda(1/x + 1/y)
                if place.is_finite:
                    s = x + y
                    if not s.is_zero():
                        h = x.inv() + y.inv()
                        if not h.is_zero():
                            lhs = lx * ly
                            rhs = lambda_place_phase(place, s) * lambda_place_phase(place, h)
                            assert lhs.q == rhs.q, (place, x.value, y.value)
                else:
                    s = x + y
                    if abs(s) > 1e-9:
                        h = 1 / x + 1 / y
                        if abs(h) > 1e-9:
                            lhs = (lx * ly).value
                            rhs = (
                                lambda_place_phase(place, s)
                                * lambda_place_phase(place, h)
                            ).value
                            assert abs(lhs - rhs) < 1e-12
