import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate
from scipy import special as sp

from meanwidth.special import (
    bessel_k0,
    gaussian_abs_moment,
    log_gamma_ratio,
    normal_tail,
    normal_tail_inverse,
)

SQRT_2PI = math.sqrt(2.0 * math.pi)


class TestNormalTail:
    def test_at_zero(self):
        assert normal_tail(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_mills_sandwich_at_2(self):
        # (1/t - 1/t^3) phi(t) <= tail <= phi(t)/t at t=2
        value = float(normal_tail(2.0))
        lo = (0.5 - 0.125) * math.exp(-2.0) / SQRT_2PI
        hi = 0.5 * math.exp(-2.0) / SQRT_2PI
        assert lo <= value <= hi

    def test_mills_sandwich_dense_grid(self):
        t = np.linspace(0.05, 12.0, 500)
        phi = np.exp(-0.5 * t * t) / SQRT_2PI
        tail = normal_tail(t)
        assert np.all(tail <= phi / t + 1e-300)
        assert np.all(tail >= (1.0 / t - 1.0 / t**3) * phi - 1e-300)

    def test_quantile(self):
        # 97.5% quantile of the standard normal
        assert float(normal_tail(1.959964)) == pytest.approx(0.025, abs=1e-7)
        oracle = 0.5 * sp.erfc(1.959964 / math.sqrt(2.0))
        assert float(normal_tail(1.959964)) == pytest.approx(oracle, rel=1e-14)

    @given(st.floats(min_value=-10.0, max_value=10.0))
    def test_symmetry(self, t):
        assert float(normal_tail(t) + normal_tail(-t)) == pytest.approx(1.0, abs=1e-12)

    def test_strictly_decreasing(self):
        t = np.linspace(-8.0, 8.0, 200)
        assert np.all(np.diff(normal_tail(t)) < 0)

    def test_inverse_roundtrip(self):
        for p in (0.4, 0.1, 1e-4, 1e-12):
            assert float(normal_tail(normal_tail_inverse(p))) == pytest.approx(p, rel=1e-12)


class TestLogGammaRatio:
    def test_identical_arguments(self):
        assert log_gamma_ratio(3.0, 3.0) == 0.0

    def test_gamma_2_over_gamma_1(self):
        assert log_gamma_ratio(2.0, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_half_integer(self):
        # Gamma(1)/Gamma(1.5) = 2/sqrt(pi)
        assert log_gamma_ratio(1.0, 1.5) == pytest.approx(math.log(2.0 / math.sqrt(math.pi)), abs=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            log_gamma_ratio(0.0, 1.0)
        with pytest.raises(ValueError):
            log_gamma_ratio(1.0, -2.0)

    @pytest.mark.parametrize("a", [0.5, 1.0, 7.3, 150.0, 1e4, 1e7])
    def test_recurrence(self, a):
        # Gamma(a+1)/Gamma(a) = a
        assert math.exp(log_gamma_ratio(a + 1.0, a)) == pytest.approx(a, rel=1e-10)

    def test_large_arguments_finite(self):
        assert math.isfinite(math.exp(log_gamma_ratio(1e7 / 2, (1e7 + 4) / 2)))


class TestGaussianAbsMoment:
    def test_zeroth(self):
        assert gaussian_abs_moment(0) == 1.0

    def test_first(self):
        assert gaussian_abs_moment(1) == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-14)

    def test_third(self):
        assert gaussian_abs_moment(3) == pytest.approx(2.0 * math.sqrt(2.0 / math.pi), rel=1e-14)

    def test_fourth(self):
        assert gaussian_abs_moment(4) == pytest.approx(3.0, rel=1e-13)

    def test_even_moments_are_double_factorials(self):
        df = 1.0
        for m in range(6):
            if m > 0:
                df *= 2 * m - 1
            assert gaussian_abs_moment(2 * m) == pytest.approx(df, rel=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            gaussian_abs_moment(-1)


class TestBesselK0:
    def test_at_one(self):
        assert bessel_k0(1.0) == pytest.approx(0.421024438240708, rel=1e-10)

    def test_large_z_asymptotic_bound(self):
        value = bessel_k0(10.0)
        assert 0.0 < value < math.exp(-10.0) * math.sqrt(math.pi / 20.0) * 1.1

    def test_monotone(self):
        assert bessel_k0(1.0) > bessel_k0(2.0)

    def test_rejects_nonpositive(self):
        for z in (0.0, -1.0):
            with pytest.raises(ValueError):
                bessel_k0(z)

    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 5.0])
    def test_second_quadrature_scheme(self, z):
        # independent route: K0(z) = int_1^inf exp(-z x) / sqrt(x^2 - 1) dx,
        # with x = 1 + s^2 to remove the endpoint singularity
        oracle, _ = integrate.quad(
            lambda s: 2.0 * math.exp(-z * (1.0 + s * s)) / math.sqrt(s * s + 2.0),
            0.0,
            np.inf,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=300,
        )
        assert bessel_k0(z) == pytest.approx(oracle, abs=1e-8, rel=1e-10)

    @pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 2.0, 5.0, 20.0])
    def test_against_scipy(self, z):
        assert bessel_k0(z) == pytest.approx(float(sp.k0(z)), rel=1e-10)
