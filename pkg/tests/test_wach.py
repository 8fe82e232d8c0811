"""Tests for `cyclowin.wach`."""

import pytest

from cyclowin.exceptions import BadLevels, BudgetExceeded, IncompatibleBases, NotRank1
from cyclowin.wach import (
    HEADROOM,
    Alpha,
    MonomialLattice,
    intersect,
    invert_prime,
    is_kisin_ren,
    kr_from_wach,
    kr_lattice,
    lambda_r0_transport,
    parse_alpha,
    phi_pullback,
    positive_part,
    predicted_stabilization,
    wach_from_kr,
)
from cyclowin.zoo import build


def test_parse_alpha():
    alpha = parse_alpha("2*E1^2*u*p^3", 1)
    assert alpha.unit == 2
    assert alpha.size == 1 + HEADROOM + 2
    assert alpha.exponents[:4] == (3, 1, 2, 0)
    assert alpha.support() == (1,)
    assert alpha.height == 2
    assert str(alpha) == "2*p^3*u*E1^2"
    assert parse_alpha("1", 2).exponents == (0,) * (2 + HEADROOM + 2)


@pytest.mark.parametrize("text", ["", "E0", "v", "0", "2**E1"])
def test_parse_alpha_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_alpha(text, 1)


@pytest.mark.parametrize("text, rendered", [("-1", "-1"), ("2", "2"), ("1", "1"), ("-1*E1", "-1*E1"), ("2*2", "4")])
def test_units_render_without_a_trailing_one(text, rendered):
    alpha = parse_alpha(text, 1)
    assert str(alpha) == rendered
    assert alpha.to_json()["monomial"] == rendered


def test_parse_alpha_rejects_integer_factors_divisible_by_p():
    with pytest.raises(ValueError):
        parse_alpha("3*E1", 1, p=3)
    with pytest.raises(ValueError):
        parse_alpha("-6", 1, p=3)
    assert parse_alpha("-1*E1", 1, p=3).unit == -1
    assert parse_alpha("3*E1", 1, p=5).unit == 3


def test_parse_alpha_budget():
    with pytest.raises(BudgetExceeded):
        parse_alpha("E9", 1)
    assert parse_alpha("E9", 1, budget=9).support() == (9,)


def test_phi_pullback_and_intersection():
    alpha = parse_alpha("1", 1)
    free = MonomialLattice.free(alpha)
    u_lattice = MonomialLattice(alpha, (0, 1) + (0,) * (alpha.size - 2))
    e1_lattice = MonomialLattice(alpha, (0, 0, 1) + (0,) * (alpha.size - 3))
    p_lattice = MonomialLattice(alpha, (1,) + (0,) * (alpha.size - 1))
    assert phi_pullback(free) == free
    assert phi_pullback(u_lattice).exponents[1:3] == (1, 1)
    assert phi_pullback(e1_lattice).exponents[2:4] == (0, 1)
    assert intersect(u_lattice, p_lattice).exponents[:2] == (1, 1)
    assert intersect(invert_prime(free, "E1"), free) == free
    assert intersect(e1_lattice, e1_lattice) == e1_lattice


def test_phi_pullback_multiplies_by_alpha():
    alpha = parse_alpha("E1", 1)
    assert phi_pullback(MonomialLattice.free(alpha)).exponents[2] == 1


def test_budget_and_bases():
    alpha = parse_alpha("1", 1)
    top = MonomialLattice(alpha, (0,) * (alpha.size - 1) + (1,))
    with pytest.raises(BudgetExceeded):
        phi_pullback(top)
    other = MonomialLattice.free(parse_alpha("E1", 1))
    with pytest.raises(IncompatibleBases):
        intersect(MonomialLattice.free(alpha), other)
    with pytest.raises(IncompatibleBases):
        MonomialLattice(alpha, (0, 0))
    with pytest.raises(ValueError):
        invert_prime(MonomialLattice.free(alpha), "p")


def test_inverted_primes_are_normalized():
    alpha = parse_alpha("1", 1)
    L = invert_prime(MonomialLattice(alpha, (0, 0, 3) + (0,) * (alpha.size - 3)), "E1")
    assert L.exponents[2] == 0
    assert L.to_json()["inverted"] == ["E1"]
    assert positive_part(alpha).to_json()["inverted"] == ["p"]


@pytest.mark.parametrize(
    "text, r, expected",
    [("1", 1, 1), ("E1", 1, 1), ("E1", 2, 2), ("E1^2", 2, 2), ("2*E1", 2, 2), ("E2", 2, 1), ("E2", 3, 2), ("E1", 3, 3)],
)
def test_predicted_stabilization(text, r, expected):
    assert predicted_stabilization(parse_alpha(text, r), r) == expected


@pytest.mark.parametrize(
    "text, r",
    [("1", 1), ("E1", 1), ("2*E1", 1), ("E1^2", 1), ("1", 2), ("E1", 2), ("2*E1", 2), ("E1^2", 2), ("E2", 2)],
)
def test_translation_round_trip(text, r):
    alpha = parse_alpha(text, r)
    M = kr_lattice(alpha, r)
    assert is_kisin_ren(M, r)
    N = wach_from_kr(M, r)
    result = kr_from_wach(N, r)
    assert result.lattice == M
    assert wach_from_kr(result.lattice, r) == N
    assert result.stable_after == predicted_stabilization(alpha, r)
    assert result.history[0] == N
    if r == 1:
        assert result.lattice == N


def test_translation_rejects_support_beyond_the_level():
    alpha = parse_alpha("E2", 1)
    with pytest.raises(BadLevels):
        kr_lattice(alpha, 1)
    with pytest.raises(BadLevels):
        kr_from_wach(MonomialLattice.free(alpha), 1)
    with pytest.raises(BadLevels):
        wach_from_kr(MonomialLattice.free(alpha), 1)


def test_e2_at_level_two():
    alpha = parse_alpha("E2", 2)
    M = kr_lattice(alpha, 2)
    assert M.exponents[2:4] == (0, 0)
    result = kr_from_wach(wach_from_kr(M, 2), 2)
    assert result.lattice == M
    assert result.stable_after == 1


def test_kisin_ren_lattice_of_e1_at_level_two():
    alpha = parse_alpha("E1", 2)
    M = kr_lattice(alpha, 2)
    assert M.exponents[2:4] == (1, 0)
    assert not is_kisin_ren(MonomialLattice.free(alpha), 2)


def test_transport_of_rank_one_modules(ctx):
    expected = {"tate": (1, 0), "gm": (1, 1), "tate_twist": (2, 0), "gm_twist": (2, 1)}
    for name, (unit, height) in expected.items():
        alpha = lambda_r0_transport(build(name, ctx).bt)
        assert isinstance(alpha, Alpha)
        assert alpha.unit == unit
        assert alpha.height == height
        assert alpha.support() == ((ctx.r,) if height else ())
    with pytest.raises(NotRank1):
        lambda_r0_transport(build("tate+gm", ctx).bt)
