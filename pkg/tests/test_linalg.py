"""Tests for `cyclowin.linalg`."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclowin.exceptions import NotAUnit
from cyclowin.frames import sigma_frame
from cyclowin.linalg import (
    adjugate,
    determinant,
    diag,
    identity,
    is_invertible,
    mat_inverse,
    mat_mul,
    mat_scale,
    module_order,
    solve_linear_system,
    solve_mod_prime_power,
)
from cyclowin.padic_rings import SigmaSeries, variable
from cyclowin.windows import random_invertible

from .strategies import SMALL


def test_inverse_of_random_invertible(rng):
    frame = sigma_frame(SMALL)
    for n in (1, 2, 3):
        A = random_invertible(frame, n, rng)
        assert mat_mul(A, mat_inverse(A)) == identity(SigmaSeries, SMALL, n)


def test_non_invertible_matrix():
    u = variable(SMALL)
    A = diag([SigmaSeries.one(SMALL), u])
    assert not is_invertible(A)
    with pytest.raises(NotAUnit):
        mat_inverse(A)


def test_adjugate_identity(rng):
    A = random_invertible(sigma_frame(SMALL), 3, rng)
    det = determinant(A)
    assert mat_mul(A, adjugate(A)) == mat_scale(identity(SigmaSeries, SMALL, 3), det)


@pytest.mark.parametrize(
    "A, b, solvable",
    [
        ([[3]], [6], True),
        ([[3]], [1], False),
        ([[1, 2], [2, 4]], [1, 3], False),
        ([[9, 0], [0, 1]], [18, 5], True),
    ],
)
def test_solve_mod_prime_power(A, b, solvable):
    solution = solve_mod_prime_power(A, b, 3, 3)
    assert (solution.particular is not None) is solvable
    if solvable:
        for row, rhs in zip(A, b):
            assert sum(a * x for a, x in zip(row, solution.particular)) % 27 == rhs % 27


def _solutions(A, b, q):
    n = len(A[0])
    return [
        x
        for x in itertools.product(range(q), repeat=n)
        if all(sum(a * xi for a, xi in zip(row, x)) % q == rhs % q for row, rhs in zip(A, b))
    ]


def test_kernel_of_multiplication_by_p():
    solution = solve_mod_prime_power([[3]], [0], 3, 3)
    assert len(solution.kernel) == 1
    assert module_order(solution.kernel, 3, 3) == 3
    assert all(3 * g[0] % 27 == 0 for g in solution.kernel)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(st.integers(0, 7), min_size=2, max_size=2), min_size=1, max_size=3),
    st.lists(st.integers(0, 7), min_size=3, max_size=3),
)
def test_solve_mod_prime_power_against_enumeration(A, b):
    b = b[: len(A)]
    solutions = _solutions(A, b, 8)
    solution = solve_mod_prime_power(A, b, 2, 3)
    assert (solution.particular is not None) is bool(solutions)
    if solutions:
        assert solution.particular in solutions
        assert module_order(solution.kernel, 2, 3) == len(solutions)
    for g in solution.kernel:
        assert any(x % 8 for x in g)
        assert all(sum(a * x for a, x in zip(row, g)) % 8 == 0 for row in A)


def test_module_order():
    assert module_order([[3, 0], [0, 1]], 3, 3) == 9 * 27
    assert module_order([], 3, 3) == 1


def test_solve_linear_system_for_series():
    u = variable(SMALL)
    target = u * 5 + 2

    def residual(xs):
        return [xs[0] * (u + 1) - target * (u + 1)]

    particular, kernel = solve_linear_system(residual, [(SigmaSeries, SMALL)])
    assert particular == [target]
    assert kernel == []
