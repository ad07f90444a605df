"""Tests for the exact arithmetic foundation: Poly, RationalFunction,
PowerSeries, ExpPoly."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuemoments.exact import (
    ExpPoly,
    Poly,
    PowerSeries,
    RationalFunction,
    rat_from_str,
    rat_to_str,
    series_logderiv,
)

small_fracs = st.fractions(max_denominator=6,
                           min_value=Fraction(-5), max_value=Fraction(5))
polys = st.lists(small_fracs, max_size=5).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def test_rat_roundtrip():
    assert rat_to_str(Fraction(-3, 6)) == "-1/2"
    assert rat_from_str("-1/2") == Fraction(-1, 2)
    assert rat_to_str(2) == "2/1"


class TestPoly:
    def test_zero_normalization(self):
        assert Poly((0, 0)).is_zero()
        assert Poly((1, 0)).coeffs == (Fraction(1),)

    def test_eval(self):
        p = Poly((1, 2, 3))  # 1 + 2x + 3x^2
        assert p.eval(Fraction(2)) == 17

    def test_divmod_exact(self):
        a = Poly((1, 2, 1))     # (1+x)^2
        b = Poly((1, 1))
        q, r = a.divmod(b)
        assert q == b and r.is_zero()

    def test_scale_arg(self):
        p = Poly((0, 0, 1))
        assert p.scale_arg(Fraction(1, 2)).eval(2) == 1

    def test_json_roundtrip(self):
        p = Poly((Fraction(1, 3), -2))
        assert Poly.from_json(p.to_json()) == p

    @given(polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_product_rule(self, f, g):
        lhs = (f * g).derivative()
        rhs = f.derivative() * g + f * g.derivative()
        assert lhs == rhs

    @given(polys, nonzero_polys)
    @settings(max_examples=60, deadline=None)
    def test_divmod_identity(self, a, b):
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.is_zero() or r.degree() < b.degree()

    @given(nonzero_polys, nonzero_polys)
    @settings(max_examples=60, deadline=None)
    def test_gcd_divides(self, a, b):
        g = a.gcd(b)
        assert (a % g).is_zero() and (b % g).is_zero()


class TestRationalFunction:
    def test_canonical_form(self):
        # (x^2-1)/(x-1) reduces to x+1 with monic denominator
        rf = RationalFunction(Poly((-1, 0, 1)), Poly((-1, 1)))
        assert rf == RationalFunction(Poly((1, 1)))

    def test_eval_and_pole(self):
        rf = RationalFunction(Poly((1,)), Poly((-1, 1)))
        assert rf.eval(Fraction(3)) == Fraction(1, 2)
        with pytest.raises(ZeroDivisionError):
            rf.eval(Fraction(1))

    def test_json_roundtrip(self):
        rf = RationalFunction(Poly((1, 2)), Poly((3, 0, 1)))
        assert RationalFunction.from_json(rf.to_json()) == rf

    @given(polys, nonzero_polys, polys, nonzero_polys)
    @settings(max_examples=40, deadline=None)
    def test_field_ops(self, a, b, c, d):
        x = RationalFunction(a, b)
        y = RationalFunction(c, d)
        assert x + y == y + x
        assert x + y - y == x
        assert x * y == y * x
        if not y.is_zero():
            assert (x / y) * y == x

    @given(polys, nonzero_polys)
    @settings(max_examples=40, deadline=None)
    def test_quotient_rule(self, a, b):
        rf = RationalFunction(a, b)
        assert rf.derivative() == RationalFunction(
            a.derivative() * b - a * b.derivative(), b * b)


class TestPowerSeries:
    def test_exp_log_roundtrip(self):
        f = PowerSeries([1, 1, Fraction(1, 2)], order=8)
        assert f.log().exp() == f

    def test_geometric_inverse(self):
        one = PowerSeries.const(1, order=10)
        g = one / (one - PowerSeries.x(order=10))
        assert all(g[k] == 1 for k in range(10))

    def test_logderiv(self):
        # f = exp(x): t f'/f = t
        f = PowerSeries.x(order=12).exp()
        ld = series_logderiv(f)
        assert ld[0] == 0 and ld[1] == 1 and ld[2] == 0

    def test_scale_arg(self):
        f = PowerSeries([0, 0, 1], order=6).scale_arg(Fraction(1, 2))
        assert f[2] == Fraction(1, 4)


class TestExpPoly:
    def test_derivative(self):
        # d/dt [e^{-2t}(1+t)] = e^{-2t}(-1-2t)
        f = ExpPoly(2, Poly((1, 1)))
        assert f.derivative() == ExpPoly(2, Poly((-1, -2)))

    def test_ring_ops(self):
        f = ExpPoly(1, Poly((1, 1)))
        g = ExpPoly(2, Poly((0, 3)))
        assert (f * g).c == 3
        assert (f * g).poly == Poly((0, 3, 3))
        with pytest.raises(ValueError):
            f + g  # mismatched decay rates cannot be added

    def test_eval_float(self):
        import math
        f = ExpPoly(1, Poly((2, 2)))
        t = 0.7
        assert f.eval_float(t) == pytest.approx(math.exp(-t) * (2 + 2 * t))
