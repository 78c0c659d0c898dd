import cmath
import math
import random
from fractions import Fraction

import pytest

from adelic.characters import REAL_PLACE, Place, UnitPhase, lambda_phase
from adelic.errors import (
    DegenerateTimeError,
    HalfIntegerObstructionError,
    OutOfDomainError,
    UnknownModelError,
    ZeroFunctionError,
)
from adelic.integrate import BallSpec, StepFunction
from adelic.padic import vp_fraction
from adelic.quantum import (
    CommutationResult,
    HWGroupElement,
    PhasePoint,
    commutation_check,
    compose_propagators,
    eigen_check,
    hw_group_product,
    kernel_apply,
    minisuperspace_model,
    propagator,
    quadratic_model,
    weyl_apply,
    weyl_k,
    weyl_q,
    weyl_w,
)

F = Fraction


class TestWeylOperators:
    def test_identity_shift(self):
        w = StepFunction.omega(3)
        assert weyl_k(F(0), w) == w

    def test_pointwise_example(self):
        # Q(1/3) K(1/3) applied to the unit-ball indicator, at x = -1/3
        w = StepFunction.omega(3)
        out = weyl_q(F(1, 3), weyl_k(F(1, 3), w))
        got = out.evaluate(F(-1, 3))
        want = cmath.exp(2j * math.pi * 8 / 9)
        assert abs(got - want) < 1e-12

    def test_w_inverse_pair(self):
        w = StepFunction.omega(5)
        z = PhasePoint(5, F(1, 5), F(2, 5))
        out = weyl_w(-z, weyl_w(z, w))
        assert out.approx_eq(w, 1e-12)

    def test_dispatcher(self):
        w = StepFunction.omega(3)
        assert weyl_apply("K", w, beta=F(0)) == w
        assert weyl_apply("Q", w, alpha=F(1)) == w  # chi trivial on Z_3
        with pytest.raises(ValueError):
            weyl_apply("X", w)

    def test_half_integer_obstruction_at_2(self):
        w = StepFunction.omega(2)
        with pytest.raises(HalfIntegerObstructionError):
            weyl_w(PhasePoint(2, F(1), F(1)), w)
        # qk in 2 Z_2 is fine
        weyl_w(PhasePoint(2, F(2), F(1)), w)


class TestCommutation:
    def test_zero_alpha_commutes(self):
        w = StepFunction.omega(3)
        res = commutation_check(F(0), F(1, 3), w)
        assert res.phase.q == 0 and res.sign == 0

    def test_realized_sign_is_minus(self):
        w = StepFunction.omega(3)
        res = commutation_check(F(1, 3), F(1, 3), w)
        assert res.phase.q == F(8, 9)  # {-1/9}_3
        assert res.sign == -1

    def test_integral_product_trivial(self):
        w = StepFunction.omega(5)
        res = commutation_check(F(5), F(1, 5), w)
        assert res.phase.q == 0 and res.sign == 0

    def test_constant_across_random_states(self):
        rng = random.Random(11)
        for _ in range(25):
            p = random.choice([3, 5])
            psi = StepFunction.random(p, 1, 1, 1, rng)
            if not psi.values:
                continue
            a = F(rng.randint(-5, 5), p)
            b = F(rng.randint(-5, 5), p)
            res = commutation_check(a, b, psi)
            assert isinstance(res, CommutationResult)
            want = (-a * b) % 1
            assert res.sign in (0, -1)
            assert res.phase.q == want % 1 or res.sign == 0

    def test_zero_state_rejected(self):
        w = StepFunction.omega(3) * 0
        with pytest.raises(ZeroFunctionError):
            commutation_check(F(1), F(1), w)


class TestHWGroup:
    def test_basic_product(self):
        g1 = HWGroupElement(PhasePoint(3, F(1), F(0)), F(0))
        g2 = HWGroupElement(PhasePoint(3, F(0), F(1)), F(0))
        g = hw_group_product(g1, g2)
        assert (g.z.q, g.z.k, g.alpha) == (1, 1, F(1, 2))

    def test_inverse(self):
        g = HWGroupElement(PhasePoint(5, F(2, 5), F(3)), F(7, 2))
        e = hw_group_product(g, g.inverse())
        assert (e.z.q, e.z.k, e.alpha) == (0, 0, 0)

    def test_associativity_battery(self):
        rng = random.Random(0)
        for _ in range(1000):
            p = random.choice([2, 3, 5, 7])

            def el():
                return HWGroupElement(
                    PhasePoint(
                        p,
                        F(rng.randint(-9, 9), rng.randint(1, 9)),
                        F(rng.randint(-9, 9), rng.randint(1, 9)),
                    ),
                    F(rng.randint(-9, 9), rng.randint(1, 9)),
                )

            a, b, c = el(), el(), el()
            lhs = hw_group_product(hw_group_product(a, b), c)
            rhs = hw_group_product(a, hw_group_product(b, c))
            assert lhs == rhs


class TestModels:
    def test_unknown_model(self):
        with pytest.raises(UnknownModelError):
            quadratic_model("anharmonic")
        with pytest.raises(UnknownModelError):
            quadratic_model("free", a=1)

    def test_free_coefficients(self):
        m = quadratic_model("free")
        co = m.coefficients(Place.finite(5), F(2))
        assert (co.A, co.B, co.C) == (F(1, 4), F(-1, 2), F(1, 4))
        assert co.action(F(1), F(0)) == F(1, 4)

    def test_constant_field_action(self):
        # classical action of acceleration -a through endpoint derivatives:
        # d S / d x2 must equal the final velocity of the classical path
        m = quadratic_model("constantField", a=F(1, 2))
        T, x2, x1 = F(2), F(3), F(1)
        co = m.coefficients(Place.finite(3), T)
        a = F(1, 2)
        v_final = (x2 - x1) / T + a * T / 2 - a * T
        dS_dx2 = 2 * co.A * x2 + co.B * x1 + co.D
        assert dS_dx2 == v_final
        v_init = (x2 - x1) / T + a * T / 2
        dS_dx1 = co.B * x2 + 2 * co.C * x1 + co.E
        assert dS_dx1 == -v_init

    def test_minisuperspace_presets(self):
        free = minisuperspace_model("freeScaleFactor")
        assert free.name == "freeScaleFactor"
        ds0 = minisuperspace_model("deSitter4D", lam=F(0))
        assert ds0.coefficients(Place.finite(3), F(1)) == quadratic_model(
            "free"
        ).coefficients(Place.finite(3), F(1))
        ds = minisuperspace_model("deSitter4D", lam=F(1, 3))
        cf = quadratic_model("constantField", a=F(1, 3))
        assert ds.coefficients(Place.finite(5), F(1)) == cf.coefficients(
            Place.finite(5), F(1)
        )
        with pytest.raises(UnknownModelError):
            minisuperspace_model("oscillator", omega=1)

    def test_oscillator_domain(self):
        m = quadratic_model("oscillator", omega=F(7))
        with pytest.raises(OutOfDomainError):
            m.coefficients(Place.finite(2), F(1))
        with pytest.raises(OutOfDomainError):
            m.coefficients(Place.finite(7), F(1, 7))
        m.coefficients(Place.finite(7), F(1))

    def test_degenerate_time(self):
        with pytest.raises(DegenerateTimeError):
            quadratic_model("free").coefficients(Place.finite(3), F(0))


class TestPropagator:
    def test_real_free_particle(self):
        val = propagator(REAL_PLACE, quadratic_model("free"), 0.0, 1.0, 0.0, 0.0)
        # phase is pinned by Chapman-Kolmogorov composition (see TestComposition)
        assert abs(val.value - cmath.exp(-1j * math.pi / 4)) < 1e-12

    def test_p5_free_particle(self):
        val = propagator(Place.finite(5), quadratic_model("free"), F(1), F(1), F(0), F(0))
        assert val.modulus == 1
        assert val.total_phase().q == 0
        assert abs(val.value - 1) < 1e-15

    def test_oscillator_at_origin(self):
        m = quadratic_model("oscillator", omega=F(7))
        val = propagator(Place.finite(7), m, F(0), F(1), F(0), F(0))
        assert val.modulus == 1
        assert abs(val.value - 1) < 1e-12

    def test_modulus_is_power_of_p(self):
        val = propagator(Place.finite(3), quadratic_model("free"), F(1), F(1, 3), F(0), F(0))
        assert val.modulus == F(1, 3)  # |B(1/3)|_3 = |-3|_3
        assert abs(abs(val.value) - 1 / math.sqrt(3)) < 1e-12


class TestComposition:
    def test_free_particle_exact_ck(self):
        m = quadratic_model("free")
        for p in (3, 5, 7):
            place = Place.finite(p)
            for (x1, x2) in ((F(0), F(1)), (F(1, p), F(2)), (F(3), F(-1, p))):
                for (t1, s, t2) in (
                    (F(0), F(1), F(2)),
                    (F(0), F(1), F(3)),
                    (F(1, p), F(1), F(2)),
                ):
                    direct = propagator(place, m, x2, t2, x1, t1)
                    composed = compose_propagators(place, m, x2, t2, x1, t1, s)
                    assert composed.modulus == direct.modulus, (p, x1, x2, t1, s, t2)
                    assert composed.total_phase().q == direct.total_phase().q

    def test_constant_field_exact_ck(self):
        m = quadratic_model("constantField", a=F(2, 3))
        for p in (3, 5, 7):
            place = Place.finite(p)
            direct = propagator(place, m, F(2), F(3), F(1), F(0))
            composed = compose_propagators(place, m, F(2), F(3), F(1), F(0), F(1))
            assert composed.modulus == direct.modulus
            assert composed.total_phase().q == direct.total_phase().q

    def test_real_place_ck(self):
        for m in (quadratic_model("free"), quadratic_model("constantField", a=F(1, 2))):
            direct = propagator(REAL_PLACE, m, 1.3, 2.0, -0.4, 0.0)
            composed = compose_propagators(REAL_PLACE, m, 1.3, 2.0, -0.4, 0.0, 0.7)
            assert abs(direct.value - composed.value) < 1e-9

    def test_lambda_cocycle_in_composition(self):
        # the lambda factors of a composition obey the defining identity
        for p in (3, 5, 7):
            T1, T2 = F(1), F(2)
            T = T1 + T2
            x = 1 / (2 * T1)
            y = 1 / (2 * T2)
            lhs = lambda_phase(p, x) * lambda_phase(p, y)
            rhs = lambda_phase(p, x + y) * lambda_phase(p, 1 / x + 1 / y)
            assert lhs.q == rhs.q
            # and lambda(2T) = lambda(1/(2T)) via the square-scaling invariance
            assert lambda_phase(p, 2 * T).q == lambda_phase(p, 1 / (2 * T)).q


class TestKernelApply:
    def test_vacuum_invariance_unit_time(self):
        w = StepFunction.omega(3)
        out = kernel_apply(
            Place.finite(3), quadratic_model("free"), F(1), w, BallSpec(3, 0, 0)
        )
        assert out.approx_eq(w, 1e-9)

    def test_small_time_is_identity(self):
        rng = random.Random(13)
        psi = StepFunction.random(3, 1, 1, 1, rng)
        out = kernel_apply(
            Place.finite(3), quadratic_model("free"), F(9), psi, BallSpec(3, 1, 0)
        )
        assert out.approx_eq(psi, 1e-9)

    def test_group_property(self):
        rng = random.Random(14)
        psi = StepFunction.random(5, 1, 0, 1, rng)
        place = Place.finite(5)
        m = quadratic_model("free")
        fwd = kernel_apply(place, m, F(1), psi, BallSpec(5, 0, 0))
        back = kernel_apply(place, m, F(-1), fwd, BallSpec(5, 1, 0))
        assert back.approx_eq(psi, 1e-9)

    def test_unitarity(self):
        rng = random.Random(15)
        for p in (3, 5):
            psi = StepFunction.random(p, 1, 1, 1, rng)
            out = kernel_apply(
                Place.finite(p), quadratic_model("free"), F(1, p), psi, BallSpec(p, 1, 0)
            )
            assert abs(out.l2_norm_sq() - psi.l2_norm_sq()) < 1e-9

    def test_numeric_composition_matches_direct(self):
        place = Place.finite(3)
        m = quadratic_model("free")
        w = StepFunction.omega(3)
        two_step = kernel_apply(
            place, m, F(1), kernel_apply(place, m, F(1), w, BallSpec(3, 0, 0)), BallSpec(3, 0, 0)
        )
        one_step = kernel_apply(place, m, F(2), w, BallSpec(3, 0, 0))
        assert two_step.approx_eq(one_step, 1e-9)


class TestEigenCheck:
    def test_vacuum_passes(self):
        res = eigen_check(
            Place.finite(5),
            quadratic_model("free"),
            F(1),
            StepFunction.omega(5),
            F(0),
            BallSpec(5, 0, 0),
        )
        assert res.passed and res.residual <= 1e-9

    def test_spreading_fails(self):
        res = eigen_check(
            Place.finite(3),
            quadratic_model("free"),
            F(1, 3),
            StepFunction.omega(3),
            F(0),
            BallSpec(3, 0, 0),
        )
        assert not res.passed and res.residual > 0.1

    def test_zero_state_rejected(self):
        with pytest.raises(ZeroFunctionError):
            eigen_check(
                Place.finite(3),
                quadratic_model("free"),
                F(1),
                StepFunction.omega(3) * 0,
                F(0),
                BallSpec(3, 0, 0),
            )
