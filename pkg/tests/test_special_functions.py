import math

import numpy as np
import pytest
from scipy import integrate, optimize

from src.errors import DomainError, PrecisionLoss
from src.special import (
    SpecialFnPolicy,
    bessel_k,
    bessel_k_derivative_asymptotic,
    gamma_fn,
    lambert_w,
    log_bessel_k,
    log_gamma,
    riemann_zeta,
)


class TestBessel:
    @pytest.mark.special
    def test_half_order_closed_form(self):
        z = np.array([0.1, 1.0, 5.0, 30.0])
        np.testing.assert_allclose(bessel_k(0.5, z), np.sqrt(np.pi / (2 * z)) * np.exp(-z), rtol=1e-13)

    @pytest.mark.special
    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.3])
    def test_recurrence(self, nu):
        z = np.array([0.5, 2.0, 10.0])
        lhs = bessel_k(nu + 1, z) - bessel_k(nu - 1, z)
        np.testing.assert_allclose(lhs, 2 * nu / z * bessel_k(nu, z), rtol=1e-12, atol=1e-300)

    @pytest.mark.special
    def test_log_form_beyond_underflow(self):
        with pytest.raises(PrecisionLoss):
            bessel_k(1.0, 800.0)
        z = 800.0
        assert log_bessel_k(1.0, z) == pytest.approx(0.5 * math.log(math.pi / (2 * z)) - z + math.log1p(3 / (8 * z)),
                                                    rel=1e-8)

    @pytest.mark.special
    def test_log_form_matches_direct(self):
        assert log_bessel_k(1.0, 2.0) == pytest.approx(math.log(bessel_k(1.0, 2.0)), rel=1e-14)

    @pytest.mark.special
    def test_k1_integral_representation(self):
        # K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt
        value, _ = integrate.quad(lambda t: math.exp(-2.0 * math.cosh(t)) * math.cosh(t), 0.0, 20.0)
        assert bessel_k(1.0, 2.0) == pytest.approx(value, rel=1e-10)

    @pytest.mark.special
    def test_nonpositive_argument(self):
        with pytest.raises(DomainError):
            bessel_k(1.0, 0.0)
        with pytest.raises(DomainError):
            log_bessel_k(1.0, -1.0)

    @pytest.mark.special
    @pytest.mark.parametrize("nu", [0.0, 0.5])
    def test_asymptotic_ratio_at_200(self, nu):
        z = 200.0
        ratio = bessel_k(nu, z) / bessel_k_derivative_asymptotic(0, nu, z)
        assert ratio == pytest.approx(1.0, rel=1e-3)

    @pytest.mark.special
    def test_asymptotic_ratio_improves_with_z(self):
        ratios = [abs(bessel_k(2.0, z) / bessel_k_derivative_asymptotic(0, 2.0, z) - 1) for z in (20.0, 50.0, 200.0)]
        assert ratios[0] > ratios[1] > ratios[2]

    @pytest.mark.special
    def test_asymptotic_derivative_sign(self):
        assert bessel_k_derivative_asymptotic(1, 0.5, 50.0) < 0
        assert bessel_k_derivative_asymptotic(2, 0.5, 50.0) > 0

    @pytest.mark.special
    def test_asymptotic_needs_large_argument(self):
        with pytest.raises(DomainError):
            bessel_k_derivative_asymptotic(0, 1.0, 2.0, SpecialFnPolicy(asymptotic_switch=10.0))


class TestLambertW:
    @pytest.mark.special
    @pytest.mark.parametrize("x", [-1 / math.e, -0.2, 0.0, 1e-8, 1.0, 10.0, 1e6, 1e100])
    def test_round_trip(self, x):
        w = lambert_w(x)
        assert w * math.exp(w) == pytest.approx(x, rel=1e-12, abs=1e-15)

    @pytest.mark.special
    def test_known_values(self):
        assert lambert_w(0.0) == 0.0
        assert lambert_w(math.e) == pytest.approx(1.0, rel=1e-14)
        assert lambert_w(-1 / math.e) == pytest.approx(-1.0, abs=1e-7)

    @pytest.mark.special
    def test_below_branch_point(self):
        with pytest.raises(DomainError):
            lambert_w(-0.5)

    @pytest.mark.special
    def test_branch_point(self):
        assert lambert_w(-1 / math.e) == -1.0
        assert lambert_w(-math.exp(-1.0)) == -1.0
        with pytest.raises(DomainError):
            lambert_w(-1 / math.e - 1e-10)

    @pytest.mark.special
    @pytest.mark.parametrize("offset", [1e-14, 1e-9, 1e-7, 1e-5])
    def test_just_above_branch_point(self, offset):
        x = -1 / math.e + offset
        w = lambert_w(x)
        assert -1.0 < w < -0.99
        assert w * math.exp(w) == pytest.approx(x, rel=1e-12)

    @pytest.mark.special
    def test_nonfinite_result(self):
        with pytest.raises(PrecisionLoss):
            lambert_w(math.inf)

    @pytest.mark.special
    def test_one_against_bisection(self):
        omega = optimize.bisect(lambda w: w * math.exp(w) - 1.0, 0.0, 1.0, xtol=1e-15)
        assert lambert_w(1.0) == pytest.approx(omega, rel=1e-13)


class TestGammaZeta:
    @pytest.mark.special
    @pytest.mark.parametrize("a", [0.3, 1.0, 2.5, 17.2])
    def test_gamma_recurrence(self, a):
        assert gamma_fn(a + 1) == pytest.approx(a * gamma_fn(a), rel=1e-13)

    @pytest.mark.special
    def test_log_gamma_large(self):
        assert log_gamma(500.5) == pytest.approx(math.lgamma(500.5), rel=1e-14)
        with pytest.raises(PrecisionLoss):
            gamma_fn(500.5)

    @pytest.mark.special
    def test_gamma_domain(self):
        with pytest.raises(DomainError):
            gamma_fn(0.0)

    @pytest.mark.special
    def test_zeta_two(self):
        assert riemann_zeta(2.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)

    @pytest.mark.special
    def test_zeta_four(self):
        assert riemann_zeta(4.0) == pytest.approx(math.pi ** 4 / 90, rel=1e-14)

    @pytest.mark.special
    def test_zeta_pole(self):
        with pytest.raises(DomainError):
            riemann_zeta(1.0)

    @pytest.mark.special
    def test_zeta_partial_sum(self):
        # partial sum to N plus the Euler-Maclaurin tail N^-1.5/1.5 - N^-2.5/2
        n = 100_000
        i = np.arange(1, n + 1, dtype=float)
        estimate = np.sum(i ** -2.5) + n ** -1.5 / 1.5 - 0.5 * n ** -2.5
        assert riemann_zeta(2.5) == pytest.approx(estimate, rel=1e-12)
