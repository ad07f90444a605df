"""Tests for the Painlevé layer: Bessel-determinant series, tau functions,
nonlinear ODE residuals, Barnes G, and the fractional-moment integral."""

from fractions import Fraction

import pytest

from cuemoments.exact import Poly, RationalFunction
from cuemoments.painleve import (
    barnes_G,
    barnes_G_int,
    fractional_moment_q1,
    painleve5_residual,
    phi_eval,
    phi_series,
    sigma_p3_residual,
    tau_finiteN,
    tau_limit,
)


class TestPhiSeries:
    def test_leading_coefficients_s1(self):
        p = phi_series(1, 8)
        assert p[0] == 1 and p[1] == 0
        assert p[2] == Fraction(-1, 6)
        assert p[3] == Fraction(1, 18)
        assert p[4] == Fraction(-1, 120)

    def test_leading_coefficients_s2(self):
        p = phi_series(2, 8)
        assert p[0] == 1 and p[1] == 0
        assert p[2] == Fraction(-1, 30)
        assert p[3] == 0
        assert p[4] == Fraction(1, 840)

    def test_second_coefficient_matches_second_moment(self):
        # -2 [t^2] phi_1 = 1/3 = E[Y_1^2] at s = 1
        from cuemoments.cauchy import limiting_moment
        assert -2 * phi_series(1, 4)[2] == \
            limiting_moment((1,), (2,)).eval(Fraction(1))

    def test_series_eval_matches_float_route(self):
        p = phi_series(1, 30)
        t = 0.3
        series_val = sum(float(c) * t ** k for k, c in enumerate(p.coeffs))
        assert phi_eval(1, t) == pytest.approx(series_val, rel=1e-9)


class TestTauLimit:
    def test_leading_coefficient(self):
        assert tau_limit(1).series[2] == Fraction(-1, 12)
        assert tau_limit(2).series[2] == Fraction(-1, 60)

    @pytest.mark.parametrize("s", [1, 2])
    def test_sigma_p3_residual_vanishes(self, s):
        res = sigma_p3_residual(tau_limit(s, K=16))
        assert all(res[k] == 0 for k in range(13))

    def test_residual_detects_wrong_tau(self):
        # negative control: perturbing one series coefficient breaks the ODE
        tau = tau_limit(1, K=12)
        tau.series.coeffs = tuple(
            c + (Fraction(1, 7) if k == 3 else 0)
            for k, c in enumerate(tau.series.coeffs))
        res = sigma_p3_residual(tau)
        assert any(res[k] != 0 for k in range(10))


class TestTauFiniteN:
    def test_closed_form_smallest(self):
        # N = s = 1: tau = -t^2/(4+2t)
        tau = tau_finiteN(1, 1)
        assert tau.ratfun == RationalFunction(Poly((0, 0, -1)), Poly((4, 2)))

    @pytest.mark.parametrize("N", [1, 2, 3])
    @pytest.mark.parametrize("s", [1, 2])
    def test_p5_residual_vanishes(self, N, s):
        assert painleve5_residual(tau_finiteN(N, s)).is_zero()

    def test_residual_detects_wrong_parameters(self):
        # negative control: the (N, s) = (2, 1) tau fails the (3, 1) equation
        assert not painleve5_residual(tau_finiteN(2, 1), N=3, s=1).is_zero()


class TestBarnesG:
    def test_integer_values(self):
        assert [barnes_G_int(n) for n in range(1, 7)] == [1, 1, 1, 2, 12, 288]

    def test_recurrence_float(self):
        import math
        # G(z+1) = Gamma(z) G(z)
        for z in (1.5, 2.25, 3.5):
            assert barnes_G(z + 1) == pytest.approx(
                math.gamma(z) * barnes_G(z), rel=1e-10)

    def test_reference_values(self):
        assert barnes_G(1.5) == pytest.approx(1.0692226492675179, rel=1e-10)
        assert barnes_G(4.5) == pytest.approx(4.186253258973907, rel=1e-10)


class TestFractionalMoment:
    def test_matches_second_moment_near_p2(self):
        # E|q_1|^p -> E[q_1^2] = 1/3 at s = 1 as p -> 2
        assert fractional_moment_q1(1.99, 1) == pytest.approx(1 / 3, abs=2e-3)

    def test_small_p_reference(self):
        assert fractional_moment_q1(0.5, 1) == pytest.approx(
            0.5502522530960304, rel=1e-6)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            fractional_moment_q1(2.5, 1)
