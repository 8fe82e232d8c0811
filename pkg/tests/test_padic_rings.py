#!/usr/bin/env python

"""Tests for `cyclowin.padic_rings`."""

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from pydantic import ValidationError

from cyclowin import default_settings
from cyclowin.exceptions import NonUnitChi, NotAUnit
from cyclowin.padic_rings import (
    Lift,
    PrecisionCtx,
    ScriptSeries,
    SigmaSeries,
    cyclo_E,
    element_c,
    element_t,
    element_t_product,
    element_y,
    factorial_valuation,
    gamma_ratio_E,
    normalize_chi,
    unit_part,
    valuation,
    variable,
)

from .strategies import SMALL, chis, script_series, sigma_series, sigma_units

relaxed = settings(max_examples=40, deadline=None)


def test_integer_helpers():
    assert valuation(54, 3) == 3
    assert valuation(0, 3) == math.inf
    assert unit_part(54, 3) == (3, 2)
    assert factorial_valuation(9, 3) == 4


def test_cyclotomic_polynomial_at_level_one():
    ctx = PrecisionCtx(p=3, N=4, M=4)
    assert cyclo_E(ctx).coefficients() == [3, 3, 1, 0]


def test_gamma_of_variable():
    ctx = PrecisionCtx(p=3, N=4, M=6)
    assert variable(ctx).gamma(4).coefficients() == [0, 4, 6, 4, 1, 0]


def test_t_modulo_small_precision():
    ctx = PrecisionCtx(p=3, N=2, M=4)
    assert element_t(ctx).coefficients() == [0, 3, 3, 1]


X = sympy.Symbol("x")


def _coefficients(expr, length):
    poly = sympy.Poly(sympy.expand(expr), X)
    return [poly.coeff_monomial(X**k) for k in range(length)]


def _fraction(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


@pytest.mark.parametrize("p, s", [(3, 1), (3, 2), (5, 1), (5, 2)])
def test_cyclo_E_matches_cyclotomic_polynomial(p, s):
    ctx = PrecisionCtx(p=p, N=3, M=12, r=s)
    expected = _coefficients(sympy.cyclotomic_poly(p**s, X).subs(X, X + 1), ctx.M)
    assert cyclo_E(ctx, s) == SigmaSeries.from_coefficients(ctx, [int(c) for c in expected])


def test_cyclo_E_at_nine_has_full_degree():
    ctx = PrecisionCtx(p=3, N=4, M=8, r=2)
    # Φ_9(1+u) = 3 + 9u + ... + u^6
    assert cyclo_E(ctx).coefficients()[6] == 1
    assert cyclo_E(ctx).coefficients()[:2] == [3, 9]


@relaxed
@given(chis())
def test_gamma_of_variable_matches_binomial_series(chi):
    expected = [int(sympy.binomial(chi, k)) if k else 0 for k in range(SMALL.M)]
    assert variable(SMALL).gamma(chi) == SigmaSeries.from_coefficients(SMALL, expected)


@pytest.mark.parametrize("r, M", [(1, 8), (2, 6)])
def test_t_matches_logarithm_series(r, M):
    ctx = PrecisionCtx(p=3, N=3, M=M, r=r)
    u0 = (1 + X) ** (ctx.p**r) - 1
    series = sympy.series(sympy.log(1 + u0), X, 0, M).removeO()
    expected = [_fraction(c) for c in _coefficients(series, M)]
    assert element_t(ctx) == ScriptSeries.from_fractions(ctx, expected)


def test_frobenius_lifts():
    ctx = PrecisionCtx(p=3, N=3, M=6)
    u = variable(ctx)
    assert u.frobenius() == SigmaSeries.from_coefficients(ctx, [0, 3, 3, 1])
    assert u.frobenius(Lift.STANDARD) == SigmaSeries.monomial(ctx, 3)


@pytest.mark.parametrize("overrides", [{"p": 2}, {"p": 9}, {"N": 0}, {"M": 0}, {"r": 0}])
def test_invalid_contexts_are_rejected(overrides):
    with pytest.raises(ValidationError):
        PrecisionCtx(**overrides)


def test_settings_defaults_and_overrides():
    ctx = PrecisionCtx.from_settings()
    assert (ctx.p, ctx.N, ctx.M, ctx.r) == tuple(default_settings[k] for k in ("p", "N", "M", "r"))
    assert ctx.lift is Lift.CYCLOTOMIC
    other = PrecisionCtx.from_settings(p=5, N=None, lift="standard")
    assert other.p == 5 and other.N == default_settings["N"] and other.lift is Lift.STANDARD
    assert other.to_json() == {"p": 5, "N": 6, "M": 64, "r": 1, "lift": "standard"}


def test_non_unit_chi():
    with pytest.raises(NonUnitChi):
        normalize_chi(SMALL, 6)


def test_variable_is_not_invertible():
    with pytest.raises(NotAUnit):
        variable(SMALL).inverse()


@relaxed
@given(sigma_units())
def test_inverse(x):
    assert x * x.inverse() == 1


@relaxed
@given(sigma_series(), sigma_series())
def test_frobenius_is_multiplicative(x, y):
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()


@relaxed
@given(sigma_series(), chis())
def test_frobenius_commutes_with_gamma(x, chi):
    assert x.frobenius().gamma(chi) == x.gamma(chi).frobenius()


@relaxed
@given(script_series(), chis(), chis())
def test_gamma_is_an_action(x, a, b):
    assert x.gamma(a).gamma(b) == x.gamma(a * b)


@relaxed
@given(sigma_series(), sigma_series())
def test_embedding_into_script_ring(x, y):
    assert ScriptSeries.embed(x * y) == ScriptSeries.embed(x) * ScriptSeries.embed(y)
    assert ScriptSeries.embed(x) == x


@relaxed
@given(chis())
def test_gamma_ratio_is_a_unit_with_the_right_value(chi):
    E = cyclo_E(SMALL)
    ratio = gamma_ratio_E(SMALL, chi)
    assert ratio.is_unit()
    assert E * ratio == E.gamma(chi)


def test_period_t_two_ways():
    assert element_t(SMALL) == element_t_product(SMALL)


def test_frobenius_of_t_and_y():
    t, y, c = element_t(SMALL), element_y(SMALL), element_c(SMALL)
    assert t.frobenius() == t * SMALL.p
    assert y.frobenius() == c * y
    assert c * SMALL.p == ScriptSeries.embed(cyclo_E(SMALL).frobenius())
