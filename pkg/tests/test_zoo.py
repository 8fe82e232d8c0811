"""Tests for `cyclowin.zoo`."""

import pytest

from cyclowin.bt_modules import bt_check, is_block_exact
from cyclowin.gamma_calculus import act_dual, action_check
from cyclowin.windows import window_check, window_hom_check
from cyclowin.zoo import (
    build,
    direct_sum,
    extension,
    gm_dual_unit_action,
    gm_y_isomorphism,
    std_gm,
    std_tate,
    unramified_twist,
    zoo_names,
)


def test_catalogue():
    assert zoo_names() == ("tate", "gm", "tate_twist", "gm_twist", "tate+gm", "ext_gm_tate")
    with pytest.raises(ValueError):
        build("elliptic", None)


@pytest.mark.parametrize("name", zoo_names())
def test_every_object_is_consistent(ctx, rng, name):
    obj = build(name, ctx)
    assert obj.name == name
    assert window_check(obj.window, rng).passed
    assert window_check(obj.script, rng).passed
    assert bt_check(obj.bt).passed
    assert action_check(obj.action).passed
    assert action_check(obj.bt_action).passed
    assert obj.bt_action.carrier == obj.bt


def test_types(ctx):
    assert std_tate(ctx).window.types == (False,)
    assert std_gm(ctx).window.types == (True,)
    assert build("tate+gm", ctx).window.types == (False, True)
    assert build("ext_gm_tate", ctx).window.types == (True, False)


def test_twist_scales_the_bt_module(ctx):
    tate, gm = std_tate(ctx), std_gm(ctx)
    twisted = unramified_twist(tate, 2)
    assert twisted.name == "tate_twist"
    assert twisted.bt.A == tuple(tuple(x * 2 for x in row) for row in tate.bt.A)
    assert unramified_twist(gm, 2).chis == gm.chis


def test_extension_is_block_triangular(ctx):
    gm, tate = std_gm(ctx), std_tate(ctx)
    ext = extension(gm, tate, (0, 1))
    assert is_block_exact(ext.bt, gm.bt, tate.bt)
    split = direct_sum(gm, tate)
    assert is_block_exact(split.bt, gm.bt, tate.bt)


def test_gm_on_the_script_frame(ctx):
    gm, tate = std_gm(ctx), std_tate(ctx)
    assert window_hom_check(gm_y_isomorphism(gm)).passed
    carried = gm_dual_unit_action(gm)
    assert carried.generators == act_dual(tate.script_action).generators


def test_rebuild_at_wider_precision(ctx):
    tate = std_tate(ctx)
    wide = tate.rebuild(ctx.widened(1))
    assert wide.ctx.N == ctx.N + 1
    assert wide.name == "tate"
    assert action_check(wide.action).passed
