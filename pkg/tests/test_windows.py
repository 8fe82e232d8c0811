"""Tests for `cyclowin.windows`."""

import itertools

import pytest

from cyclowin.exceptions import AxiomViolation, NotInD1
from cyclowin.frames import hom_gamma, hom_lambda, hom_level, sigma_frame
from cyclowin.linalg import is_invertible, is_zero_matrix, transpose
from cyclowin.padic_rings import PrecisionCtx, SigmaSeries, variable
from cyclowin.windows import (
    FilteredMatrix,
    Window,
    WindowHom,
    base_change,
    canonical_base_change_map,
    coboundary,
    d1_from_gamma,
    dual,
    dual_twist_iso,
    dual_unit_window,
    fv_pair,
    gamma_from_d1,
    hom_module_order,
    hom_reduces_to_identity,
    hom_solve,
    lift_difference,
    lift_isomorphism,
    lift_window,
    lifts_isomorphic,
    random_window,
    reduce_mod_pn,
    torsor_action,
    unit_window,
    window_check,
    window_hom_check,
)
from cyclowin.zoo import build


def test_unit_windows(sigma, script, rng):
    for frame in (sigma, script):
        for W in (unit_window(frame), dual_unit_window(frame)):
            assert window_check(W, rng).passed
    assert dual(unit_window(sigma)) == dual_unit_window(sigma)


def test_random_windows(sigma, script, rng):
    for i in range(6):
        W = random_window((sigma, script)[i % 2], rng, 1 + i % 3, degree=2)
        assert window_check(W, rng).passed


def test_singular_psi_is_reported(sigma, rng):
    W = Window(sigma, (True,), ((sigma.zero(),),))
    assert not window_check(W, rng, strict=False).passed
    with pytest.raises(AxiomViolation):
        window_check(W, rng)


def test_duality(sigma, rng):
    W = random_window(sigma, rng, 3, degree=2)
    assert dual(dual(W)) == W
    F, V = fv_pair(W)
    assert fv_pair(dual(W)) == (transpose(V), transpose(F))
    assert tuple(not t for t in W.types) == dual(W).types


def test_base_change(ctx, sigma, script, rng):
    W = random_window(sigma, rng, 2, degree=2)
    for h in (hom_lambda(ctx), hom_gamma(sigma, 4), hom_level(sigma)):
        assert window_check(base_change(W, h), rng).passed
        assert window_hom_check(canonical_base_change_map(W, h)).passed
    with pytest.raises(ValueError):
        base_change(random_window(script, rng, 1), hom_lambda(ctx))


def test_dual_twist_by_y(sigma, rng):
    W = random_window(sigma, rng, 2, degree=2)
    f = dual_twist_iso(W)
    assert window_hom_check(f).passed
    assert is_invertible(f.matrix.values())


def test_filtered_matrix_needs_witnesses(sigma):
    types_n, types_l = (False,), (True,)
    with pytest.raises(NotInD1):
        FilteredMatrix.from_values(sigma, types_n, types_l, ((sigma.one(),),))


def test_filtered_inverse_and_composition(sigma, rng):
    W = random_window(sigma, rng, 3, degree=2)
    H = FilteredMatrix.build(
        sigma,
        W.types,
        W.types,
        lambda i, j: sigma.fil(sigma.one()) if (not W.types[i] and W.types[j]) else sigma.element(int(i == j)),
    )
    identity = FilteredMatrix.identity(sigma, W.types)
    assert (H @ H.inverse()).values() == identity.values()


def test_hom_solve_between_unit_windows(sigma):
    endomorphisms = hom_solve(unit_window(sigma), unit_window(sigma))
    for f in endomorphisms:
        assert window_hom_check(f).passed
    # Hom(Q_p/Z_p, Q_p/Z_p) = Z_p, which is Z/p^N at working precision
    assert hom_module_order(endomorphisms) == sigma.ctx.modulus
    assert hom_module_order([]) == 1


TINY = PrecisionCtx(p=3, N=1, M=3, r=1)


def _value_coords(values):
    return tuple(c for row in values for x in row for c in x.coords)


def _spanned_values(homs, q, size):
    vectors = [_value_coords(f.matrix.values()) for f in homs]
    spanned = set()
    for combination in itertools.product(range(q), repeat=len(vectors)):
        spanned.add(tuple(sum(c * v[k] for c, v in zip(combination, vectors)) % q for k in range(size)))
    return spanned


@pytest.mark.parametrize("source_type", [False, True])
@pytest.mark.parametrize("target_type", [False, True])
def test_hom_solve_matches_enumeration(source_type, target_type):
    frame = sigma_frame(TINY)
    u = variable(TINY)
    W1 = Window(frame, (source_type,), ((u + 1,),))
    W2 = Window(frame, (target_type,), ((frame.one(),),))
    elements = [SigmaSeries(TINY, coords) for coords in itertools.product(range(3), repeat=TINY.M)]
    found = set()
    for x in elements:
        entry = frame.fil(x) if (not target_type and source_type) else x
        H = FilteredMatrix.build(frame, W2.types, W1.types, lambda i, j: entry)
        if window_hom_check(WindowHom(W1, W2, H), strict=False).passed:
            found.add(_value_coords(H.values()))
    homs = hom_solve(W1, W2)
    assert _spanned_values(homs, 3, TINY.M) == found
    assert hom_module_order(homs) == len(found)


def test_hom_solve_drops_witness_syzygies(sigma):
    # E * 9u^9 vanishes mod (27, u^10), so Hom(gm, tate) has kernel vectors with zero value
    homs = hom_solve(dual_unit_window(sigma), unit_window(sigma))
    for f in homs:
        assert not is_zero_matrix(f.matrix.values())
        assert window_hom_check(f).passed


@pytest.mark.parametrize(
    "source, target, order",
    [
        ("tate", "tate", 27),
        ("gm", "gm", 27),
        ("tate_twist", "tate_twist", 27),
        ("tate", "gm", 1),
        ("tate", "tate_twist", 1),
    ],
)
def test_hom_count_survives_base_change(ctx, source, target, order):
    first, second = build(source, ctx), build(target, ctx)
    over_sigma = hom_module_order(hom_solve(first.window, second.window))
    over_script = hom_module_order(hom_solve(first.script, second.script))
    assert over_sigma == over_script == order


def test_d1_encoding(ctx, rng):
    W = random_window(sigma_frame(ctx.mod_pn(1)), rng, 2, dL=1, degree=2)
    one = W.frame.one()
    gamma = ((one, one), (one, one))
    G, G1 = d1_from_gamma(W, gamma)
    assert gamma_from_d1(W, G, G1) == gamma
    with pytest.raises(NotInD1):
        gamma_from_d1(W, G1, G)


@pytest.mark.parametrize("n", [1, 2])
def test_lifts_form_a_torsor(ctx, rng, n):
    W = random_window(sigma_frame(ctx.mod_pn(n + 1)), rng, 2, degree=2)
    W_bar, W_n = reduce_mod_pn(W, 1), reduce_mod_pn(W, n)
    gamma = tuple(tuple(W_bar.frame.random_element(rng, 3) for _ in range(2)) for _ in range(2))
    G, G1 = d1_from_gamma(W_bar, gamma)
    lifted = lift_window(W_n, G, G1)
    assert window_check(lifted, rng).passed
    assert reduce_mod_pn(lifted, n) == W_n
    moved = torsor_action(W, G, G1, n)
    assert lift_difference(moved, W, n) == gamma
    with pytest.raises(ValueError):
        torsor_action(W_n, G, G1, n)


@pytest.mark.parametrize("n", [1, 2])
def test_coboundary_twists_are_isomorphic(ctx, rng, n):
    W = random_window(sigma_frame(ctx.mod_pn(n + 1)), rng, 2, degree=2)
    W_bar = reduce_mod_pn(W, 1)
    alpha = FilteredMatrix.scalar(W_bar.frame, W.types, W_bar.frame.random_element(rng, 2))
    W_a = torsor_action(W, *d1_from_gamma(W_bar, coboundary(W_bar, alpha)), n)
    found = lifts_isomorphic(W_a, W, n)
    assert found is not None
    iso = lift_isomorphism(W_a, W, n, found)
    assert isinstance(iso, WindowHom)
    assert window_hom_check(iso).passed


def test_constant_class_is_not_a_coboundary(ctx):
    unit = unit_window(sigma_frame(ctx.mod_pn(2)))
    unit_bar = reduce_mod_pn(unit, 1)
    W_c = torsor_action(unit, *d1_from_gamma(unit_bar, ((unit_bar.frame.one(),),)), 1)
    assert lifts_isomorphic(W_c, unit, 1) is None
    assert not hom_reduces_to_identity(W_c, unit, 1)
    assert hom_reduces_to_identity(unit, unit, 1)
