"""Tests for `cyclowin.gamma_calculus`."""

import pytest
from hypothesis import given, settings

from cyclowin.exceptions import BadHom, NoSmallGenerator, NotNilpotent
from cyclowin.frames import hom_level, script_frame, sigma_frame
from cyclowin.gamma_calculus import (
    act_bt_to_win,
    act_dual,
    action_check,
    connection_residual,
    divided_power_scont_check,
    gamma_bound_check,
    gamma_close_check,
    gammafs_check,
    in_ideal,
    is_horizontal,
    lambda_gamma,
    n_operator,
    n_s,
    nm_check,
    scont_check,
    solve_connection,
    solve_neumann,
    strictness_check,
    transfer_roundtrip_check,
    twist_action,
    window_transfer_roundtrip_check,
)
from cyclowin.linalg import is_zero_matrix, zeros
from cyclowin.padic_rings import (
    PrecisionCtx,
    ScriptSeries,
    SigmaSeries,
    cyclo_E,
    element_t,
    element_y,
    gamma_ratio_E,
    variable,
)
from cyclowin.windows import random_window
from cyclowin.zoo import build

from .strategies import SMALL, chis, chis_near_one, script_series, sigma_series

relaxed = settings(max_examples=25, deadline=None)


@pytest.fixture(scope="module")
def zoo(ctx):
    return {name: build(name, ctx) for name in ("tate", "gm", "tate+gm")}


def test_lambda_at_small_precision():
    ctx = PrecisionCtx(p=3, N=1, M=3)
    assert lambda_gamma(ctx, 4).value.coefficients() == [1, 0, 1]


@relaxed
@given(chis(), chis())
def test_lambda_cocycle_and_functional_equation(chi1, chi2):
    lam1, lam2 = lambda_gamma(SMALL, chi1).value, lambda_gamma(SMALL, chi2).value
    assert lam1.constant_term == 1
    assert lam1.frobenius() == lam1 * gamma_ratio_E(SMALL, chi1)
    assert lambda_gamma(SMALL, chi1 * chi2).value == lam1 * lam2.gamma(chi1)


@pytest.mark.parametrize("chi", [2, 4, 7])
def test_lambda_does_not_depend_on_the_level(chi):
    image = hom_level(sigma_frame(SMALL)).apply(lambda_gamma(SMALL, chi).value)
    assert image == lambda_gamma(SMALL.at_level(2), chi).value


def test_lambda_needs_the_cyclotomic_lift(standard_ctx):
    with pytest.raises(BadHom):
        lambda_gamma(standard_ctx, 4)


def test_zoo_actions(zoo):
    for obj in zoo.values():
        for act in (obj.action, obj.bt_action, obj.script_action):
            assert action_check(act).passed, obj.name
        assert transfer_roundtrip_check(obj.bt_action), obj.name
        assert window_transfer_roundtrip_check(obj.action), obj.name
        assert action_check(act_bt_to_win(obj.bt_action)).passed, obj.name


def test_duality_exchanges_tate_and_gm(zoo):
    tate, gm = zoo["tate"], zoo["gm"]
    assert act_dual(tate.action) == gm.action
    assert act_dual(tate.bt_action) == gm.bt_action
    assert act_dual(gm.action) == tate.action


def test_strictness_and_teichmuller_twist(zoo):
    for obj in zoo.values():
        assert strictness_check(obj.action, 0)
        twisted = twist_action(obj.action)
        assert not strictness_check(twisted, 0)
        assert strictness_check(twisted, 1)
        assert action_check(twisted).passed


def test_monodromy_of_tate(ctx, zoo):
    op = n_operator(zoo["tate"].script_action)
    assert is_zero_matrix(op.matrix)
    u = ScriptSeries.monomial(ctx, 1)
    assert op.apply((u,)) == ((ScriptSeries.one(ctx) + u) * element_t(ctx),)
    assert nm_check(op).passed


def test_monodromy_of_gm(ctx, zoo):
    op = n_operator(zoo["gm"].script_action)
    y = element_y(ctx)
    assert op.matrix == ((n_s(y) * y.inverse(),),)
    assert nm_check(op).passed


def test_monodromy_needs_a_small_generator(ctx, zoo):
    act = zoo["tate"].script_action
    with pytest.raises(NoSmallGenerator):
        n_operator(act, 1 + ctx.p**2)
    with pytest.raises(BadHom):
        n_operator(zoo["tate"].action)


def test_gamma_bounds(ctx, zoo):
    for obj in zoo.values():
        act = obj.script_action
        for n in range(3):
            assert gamma_bound_check(act, 1 + ctx.p, n), obj.name
        for m in range(2):
            assert gamma_close_check(act, 1 + ctx.p ** (1 + m), m), obj.name
    with pytest.raises(ValueError):
        gamma_close_check(zoo["tate"].script_action, 1 + ctx.p, 1)


@relaxed
@given(sigma_series(), chis_near_one(SMALL, 1))
def test_gamma_minus_one_is_divisible_by_phi_u(x, chi):
    assert gammafs_check(x, chi, 1)


@relaxed
@given(script_series(), chis_near_one(SMALL, 1))
def test_gamma_minus_one_lands_in_t(x, chi):
    assert scont_check(x, chi)


@pytest.mark.parametrize("chi", [4, 1 + 3 * 5])
def test_gamma_minus_one_on_divided_powers_lands_in_t(chi):
    report = divided_power_scont_check(SMALL, chi)
    assert report.passed, report.failures
    assert report.checked > 0


def test_in_ideal():
    E = cyclo_E(SMALL)
    assert in_ideal(E * variable(SMALL), [E])
    assert not in_ideal(SigmaSeries.one(SMALL), [variable(SMALL)])


def test_connection_on_random_windows(standard_ctx, rng):
    frame = script_frame(standard_ctx)
    for i in range(3):
        W = random_window(frame, rng, 1 + i % 2, degree=2)
        solution = solve_connection(W)
        assert is_zero_matrix(connection_residual(W, solution))
        assert is_horizontal(W, solution.C)
        C, _ = solve_neumann(W, zeros(ScriptSeries, standard_ctx, W.n, W.n))
        assert is_zero_matrix(C)


def test_connection_refuses_other_lifts(ctx, sigma, script, rng):
    with pytest.raises(NotNilpotent):
        solve_connection(random_window(script, rng, 1))
    with pytest.raises(BadHom):
        solve_connection(random_window(sigma, rng, 1))
