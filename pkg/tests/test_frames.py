"""Tests for `cyclowin.frames`."""

import pytest

from cyclowin.exceptions import AxiomViolation, BadHom, BadLevels
from cyclowin.frames import (
    Frame,
    hom_check,
    hom_gamma,
    hom_identity,
    hom_lambda,
    hom_lambda_rs,
    hom_level,
    hom_quotient,
    script_frame,
    sigma_frame,
    frame_check,
    zp_frame,
)
from cyclowin.padic_rings import PrecisionCtx, ScriptSeries, element_c


def test_frame_axioms(ctx, standard_ctx, rng):
    for frame in (sigma_frame(ctx), sigma_frame(standard_ctx), script_frame(ctx), zp_frame(ctx)):
        assert frame_check(frame, rng).passed


def test_broken_frame_is_reported(sigma, rng):
    broken = Frame(
        kind=sigma.kind,
        ctx=sigma.ctx,
        var_level=sigma.var_level,
        varpi=sigma.varpi * 2,
        generators=sigma.generators,
        labels=sigma.labels,
        phi1_generators=sigma.phi1_generators,
    )
    report = frame_check(broken, rng, strict=False)
    assert not report.passed
    with pytest.raises(AxiomViolation):
        frame_check(broken, rng)


def test_descriptor(sigma, script):
    assert sigma.descriptor() == {"ring": "sigma", "r": 1, "lift": "cyclotomic", "var_level": 1}
    assert script.descriptor()["ring"] == "script"


def test_script_filtration_generators(script):
    assert script.labels[:3] == (1, 3, 9)
    assert script.varpi == ScriptSeries.constant(script.ctx, script.ctx.p)


def test_homomorphisms(ctx, sigma, script, rng):
    homs = [
        hom_identity(sigma),
        hom_identity(script),
        hom_lambda(ctx),
        hom_gamma(sigma, 4),
        hom_gamma(sigma, 5),
        hom_gamma(script, 7),
        hom_level(sigma),
        hom_lambda_rs(sigma, 0),
        hom_lambda_rs(sigma, 1),
        hom_quotient(sigma),
    ]
    for h in homs:
        assert hom_check(h, rng).passed, h


def test_strictness(ctx, sigma, script):
    assert hom_lambda(ctx).c == element_c(ctx)
    assert not hom_lambda(ctx).is_strict
    assert not hom_gamma(sigma, 4).is_strict
    assert hom_gamma(script, 4).is_strict
    assert hom_level(sigma).is_strict


def test_composite(ctx, sigma, rng):
    composite = hom_lambda(ctx).compose(hom_gamma(sigma, 4))
    assert hom_check(composite, rng).passed


def test_invalid_homomorphisms(standard_ctx, sigma, script):
    with pytest.raises(BadHom):
        hom_gamma(sigma_frame(standard_ctx), 4)
    with pytest.raises(BadHom):
        hom_level(sigma_frame(standard_ctx))
    with pytest.raises(BadLevels):
        hom_lambda_rs(sigma, 2)
    with pytest.raises(BadHom):
        hom_quotient(script)


def test_level_inclusion_targets_next_level(sigma):
    target = hom_level(sigma).target
    assert target.ctx == PrecisionCtx(p=3, N=3, M=10, r=2)
    assert target.var_level == 2
