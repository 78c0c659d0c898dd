import math
import random
from fractions import Fraction

import pytest

from adelic.errors import OutOfConvergenceRegionError, PoleArgumentError
from adelic.strings import (
    AdelicProductReport,
    MandelstamTriple,
    adelic_product_check,
    amplitude_p,
    beta_series_oracle,
    gamma_p,
    veneziano_real,
    zeta_ratio,
)


class TestMandelstam:
    def test_constraint(self):
        m = MandelstamTriple.of(2, 2)
        assert m.c == -3
        assert abs(sum(m.channels()) - 1) < 1e-12

    def test_from_channel_invariants(self):
        # s + t + u = -8 maps to a + b + c = 1
        s, t = -2.0, -3.0
        m = MandelstamTriple.from_st(s, t)
        assert abs(sum(m.channels()) - 1) < 1e-12
        assert m.a == -1 - s / 2


class TestGammaP:
    def test_exact_value_at_2(self):
        assert gamma_p(2, 2) == Fraction(-4, 3)

    def test_reflection_identity(self):
        rng = random.Random(0)
        for _ in range(100):
            p = random.choice([2, 3, 5, 7])
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if abs(1 - complex(p) ** (-a)) < 1e-6 or abs(1 - complex(p) ** (a - 1)) < 1e-6:
                continue
            prod = complex(gamma_p(p, a)) * complex(gamma_p(p, 1 - a))
            assert abs(prod - 1) < 1e-12

    def test_pole(self):
        with pytest.raises(PoleArgumentError):
            gamma_p(3, 0)
        with pytest.raises(PoleArgumentError):
            gamma_p(3, 1e-13 + 0j)


class TestAmplitudeP:
    def test_frozen_example(self):
        # a = b = 2, c = -3 at p = 2: (-4/3)(-4/3)(-15/112) = -5/21
        m = MandelstamTriple.of(2, 2)
        got = amplitude_p(2, m, 1.0)
        assert abs(got - (-5 / 21)) < 1e-12

    def test_symmetric_point(self):
        m = MandelstamTriple.of(1 / 3, 1 / 3)
        got = amplitude_p(5, m)
        want = complex(gamma_p(5, 1 / 3 + 0j)) ** 3
        assert abs(got - want) < 1e-12

    def test_zero_coupling(self):
        assert amplitude_p(3, MandelstamTriple.of(2, 2), 0) == 0


class TestBetaOracle:
    def test_matches_gamma_factorization(self):
        for p in (2, 3, 5, 7):
            for da in (-0.1, 0.0, 0.1):
                for db in (-0.08, 0.0, 0.12):
                    a = 1 / 3 + da + 0.05j
                    b = 1 / 3 + db - 0.03j
                    m = MandelstamTriple.of(a, b)
                    got = beta_series_oracle(p, a, b)
                    want = amplitude_p(p, m)
                    assert abs(got - want) < 1e-9, (p, a, b)

    def test_symmetry(self):
        a, b = 0.21 + 0.1j, 0.34 - 0.05j
        for p in (2, 3, 5):
            assert abs(beta_series_oracle(p, a, b) - beta_series_oracle(p, b, a)) < 1e-12

    def test_region_enforced(self):
        with pytest.raises(OutOfConvergenceRegionError):
            beta_series_oracle(3, 2.0, 2.0)
        with pytest.raises(OutOfConvergenceRegionError):
            beta_series_oracle(3, -0.1, 0.5)


class TestVenezianoReal:
    def test_forms_agree_at_symmetric_point(self):
        m = MandelstamTriple.of(1 / 3, 1 / 3)
        g = veneziano_real(m, form="gamma")
        z = veneziano_real(m, form="zeta")
        assert abs(g - z) < 1e-8

    def test_forms_agree_off_symmetric(self):
        m = MandelstamTriple.of(2.0, -0.5)
        g = veneziano_real(m, form="gamma")
        z = veneziano_real(m, form="zeta")
        assert abs(g - z) < 1e-8 * max(1, abs(g))

    def test_crossing_symmetry(self):
        a, b = 0.3 + 0.02j, 0.45 - 0.01j
        vals = set()
        for (x, y) in ((a, b), (b, a), (a, 1 - a - b), (1 - a - b, b)):
            vals.add(round(abs(veneziano_real(MandelstamTriple.of(x, y), form="zeta")), 9))
        assert len(vals) == 1

    def test_forms_agree_random_battery(self):
        rng = random.Random(42)
        count = 0
        while count < 50:
            a = complex(rng.uniform(0.05, 0.45), rng.uniform(-0.2, 0.2))
            b = complex(rng.uniform(0.05, 0.45), rng.uniform(-0.2, 0.2))
            m = MandelstamTriple.of(a, b)
            try:
                g = veneziano_real(m, form="gamma")
                z = veneziano_real(m, form="zeta")
            except PoleArgumentError:
                continue
            scale = max(1.0, abs(g))
            assert abs(g - z) <= 1e-8 * scale, (a, b)
            count += 1


class TestAdelicProduct:
    def test_identity_at_symmetric_point(self):
        m = MandelstamTriple.of(1 / 3, 1 / 3)
        rep = adelic_product_check(m, 100)
        assert rep.identity_residual <= 1e-8

    def test_euler_convergence_at_two(self):
        m = MandelstamTriple.of(2.0, -0.5)
        rep = adelic_product_check(m, 100000)
        errs = [row.rel_error for row in rep.euler_rows]
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] <= 1e-3
        assert rep.euler_converged

    def test_tiny_pmax_flagged(self):
        m = MandelstamTriple.of(2.0, -0.5)
        rep = adelic_product_check(m, 2)
        assert not rep.euler_converged
        assert rep.euler_rows[-1].rel_error > 1e-3

    def test_out_of_strip_euler_skipped(self):
        m = MandelstamTriple.of(1 / 3, 1 / 3)
        rep = adelic_product_check(m, 100)
        assert rep.euler_rows == ()
        with pytest.raises(OutOfConvergenceRegionError):
            adelic_product_check(m, 100, euler=True)

    def test_identity_battery(self):
        rng = random.Random(7)
        count = 0
        while count < 10:
            a = complex(rng.uniform(0.1, 0.4), rng.uniform(-0.1, 0.1))
            b = complex(rng.uniform(0.1, 0.4), rng.uniform(-0.1, 0.1))
            m = MandelstamTriple.of(a, b)
            try:
                rep = adelic_product_check(m, 50)
            except PoleArgumentError:
                continue
            assert rep.identity_residual <= 1e-8
            count += 1
