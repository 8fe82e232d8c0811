"""Tests for `cyclowin.bt_modules`."""

import pytest

from cyclowin.bt_modules import (
    BTModule,
    adjugate_certificate,
    bt_base_change,
    bt_check,
    bt_dual,
    bt_roundtrip,
    bt_to_win,
    random_bt_module,
    supersingular_module,
    unit_pivot_form,
    win_to_bt,
    window_roundtrip_iso,
)
from cyclowin.exceptions import AxiomViolation, BadHom
from cyclowin.frames import hom_gamma, hom_lambda_rs, hom_level
from cyclowin.windows import dual, dual_unit_window, random_window, unit_window, window_check


def test_unit_windows_give_the_two_rank_one_modules(sigma):
    E, one = sigma.generators[0], sigma.one()
    tate = win_to_bt(unit_window(sigma))
    gm = win_to_bt(dual_unit_window(sigma))
    assert (tate.A, tate.B) == (((one,),), ((E,),))
    assert (gm.A, gm.B) == (((E,),), ((one,),))


def test_window_to_module_and_back(sigma, rng):
    for i in range(6):
        W = random_window(sigma, rng, 1 + i % 3, degree=2)
        module = win_to_bt(W)
        assert bt_check(module).passed
        back, _ = window_roundtrip_iso(W)
        assert back.types.count(True) == W.types.count(True)
        assert win_to_bt(dual(W)) == bt_dual(module)


def test_module_to_window_and_back(sigma, rng):
    for i in range(6):
        module = random_bt_module(sigma, rng, 1 + i % 3)
        assert bt_check(module).passed
        assert bt_roundtrip(module).check().passed
        assert window_check(bt_to_win(module), rng).passed
        assert adjugate_certificate(module)


def test_rank_of_the_unit_pivot_form(sigma, rng):
    module = random_bt_module(sigma, rng, 3, d=1)
    form = unit_pivot_form(module)
    # one copy of E in A leaves one unit pivot in B
    assert form.rank == 1
    assert bt_to_win(module).types == (True, False, False)


def test_supersingular(sigma, rng):
    module = supersingular_module(sigma)
    assert bt_check(module).passed
    assert bt_roundtrip(module).check().passed
    W = bt_to_win(module)
    assert sorted(W.types) == [False, True]
    assert window_check(W, rng).passed


def test_broken_module(sigma):
    one = sigma.one()
    broken = BTModule(sigma, ((one,),), ((one,),))
    assert not bt_check(broken, strict=False).passed
    with pytest.raises(AxiomViolation):
        bt_check(broken)


def test_double_dual(sigma, rng):
    module = random_bt_module(sigma, rng, 2)
    assert bt_dual(bt_dual(module)) == module


def test_base_change_along_level_and_relabel(sigma, rng):
    module = random_bt_module(sigma, rng, 2)
    for h in (hom_level(sigma), hom_lambda_rs(sigma, 0)):
        assert bt_check(bt_base_change(module, h)).passed
    with pytest.raises(BadHom):
        bt_base_change(module, hom_gamma(sigma, 4))


def test_modules_live_over_breuil_kisin_frames(script):
    one = script.one()
    with pytest.raises(BadHom):
        BTModule(script, ((one,),), ((one,),))
