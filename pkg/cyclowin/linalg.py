"""Matrices over the truncated rings, and linear algebra over Z/p^N.

Matrices are tuples of row tuples of series.  Entries only need the ring interface of
:class:`~cyclowin.padic_rings.TruncatedSeries`, so the same helpers serve 𝔖, S and Z_p.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp, smith_normal_form

from .exceptions import NotAUnit
from .padic_rings import PrecisionCtx, TruncatedSeries

logger = logging.getLogger(__name__)

Matrix = tuple[tuple[TruncatedSeries, ...], ...]


def matrix(rows) -> Matrix:
    return tuple(tuple(row) for row in rows)


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), len(A[0]) if A else 0


def identity(cls, ctx: PrecisionCtx, n: int) -> Matrix:
    one, zero = cls.one(ctx), cls.zero(ctx)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(cls, ctx: PrecisionCtx, rows: int, cols: int) -> Matrix:
    zero = cls.zero(ctx)
    return tuple(tuple(zero for _ in range(cols)) for _ in range(rows))


def diag(entries: Sequence[TruncatedSeries]) -> Matrix:
    entries = list(entries)
    zero = entries[0] * 0
    return tuple(tuple(x if i == j else zero for j in range(len(entries))) for i, x in enumerate(entries))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def mat_map(f: Callable, A: Matrix) -> Matrix:
    return tuple(tuple(f(x) for x in row) for row in A)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(A: Matrix, s) -> Matrix:
    return tuple(tuple(s * x for x in row) for row in A)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    columns = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in columns:
            total = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                if not x.is_zero() and not y.is_zero():
                    total = total + x * y
            out_row.append(total)
        out.append(tuple(out_row))
    return tuple(out)


def mat_vec(A: Matrix, v: Sequence[TruncatedSeries]) -> tuple[TruncatedSeries, ...]:
    return tuple(row[0] for row in mat_mul(A, tuple((x,) for x in v)))


def column(A: Matrix, j: int) -> tuple[TruncatedSeries, ...]:
    return tuple(row[j] for row in A)


def submatrix(A: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(A[i][j] for j in cols) for i in rows)


def is_zero_matrix(A: Matrix) -> bool:
    return all(x.is_zero() for row in A for x in row)


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse over a local ring, pivoting on units."""
    n = len(A)
    ctx, cls = A[0][0].ctx, type(A[0][0])
    work = [list(row) + list(unit_row) for row, unit_row in zip(A, identity(cls, ctx, n))]
    for col in range(n):
        pivot = next((i for i in range(col, n) if work[i][col].is_unit()), None)
        if pivot is None:
            raise NotAUnit(f"matrix is not invertible (no unit pivot in column {col})")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [inv * x for x in work[col]]
        for i in range(n):
            if i != col and not work[i][col].is_zero():
                factor = work[i][col]
                work[i] = [x - factor * y for x, y in zip(work[i], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def is_invertible(A: Matrix) -> bool:
    try:
        mat_inverse(A)
    except NotAUnit:
        return False
    return True


def determinant(A: Matrix) -> TruncatedSeries:
    n = len(A)
    if n == 1:
        return A[0][0]
    total = A[0][0] * 0
    for j in range(n):
        minor = tuple(tuple(row[k] for k in range(n) if k != j) for row in A[1:])
        term = A[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(A: Matrix) -> Matrix:
    n = len(A)
    if n == 1:
        return ((A[0][0] * 0 + 1,),)
    cofactors = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(tuple(A[a][b] for b in range(n) if b != j) for a in range(n) if a != i)
            det = determinant(minor)
            row.append(det if (i + j) % 2 == 0 else -det)
        cofactors.append(tuple(row))
    return transpose(tuple(cofactors))


def block_diagonal(A: Matrix, B: Matrix) -> Matrix:
    ctx, cls = A[0][0].ctx, type(A[0][0])
    n, m = len(A), len(B)
    zero = cls.zero(ctx)
    top = tuple(tuple(row) + (zero,) * m for row in A)
    bottom = tuple((zero,) * n + tuple(row) for row in B)
    return top + bottom


@dataclass(frozen=True)
class ModularSolution:
    """Solution set of A x = b over Z/p^N: ``particular`` + span(``kernel``).

    ``kernel`` has one generator per nonzero cyclic summand of the solution module.
    """

    particular: tuple[int, ...] | None
    kernel: tuple[tuple[int, ...], ...]


def _domain_matrix(rows: Sequence[Sequence[int]], ncols: int, q: int) -> DomainMatrix:
    return DomainMatrix([[ZZ(x % q) for x in row] for row in rows], (len(rows), ncols), ZZ)


def _invariant_factors(D: DomainMatrix) -> list[int]:
    entries = D.to_list()
    return [int(entries[i][i]) for i in range(min(D.shape))]


def solve_mod_prime_power(A: Sequence[Sequence[int]], b: Sequence[int], p: int, N: int) -> ModularSolution:
    """All solutions of A x ≡ b (mod p^N), read off the Smith decomposition D = S A T over Z."""
    q = p**N
    n = len(A[0]) if A else 0
    D, S, T = smith_normal_decomp(_domain_matrix(A, n, q))
    factors = _invariant_factors(D)
    T_rows = [[int(x) for x in row] for row in T.to_list()]
    c = [sum(int(s) * (x % q) for s, x in zip(row, b)) % q for row in S.to_list()]
    y = [0] * n
    multipliers = []
    solvable = True
    for i, ci in enumerate(c):
        d = factors[i] if i < len(factors) else 0
        g = math.gcd(d, q)
        if ci % g:
            solvable = False
        elif i < n and g < q:
            y[i] = ci // g * pow(d // g, -1, q) % q
    for i in range(n):
        d = factors[i] if i < len(factors) else 0
        multiplier = q // math.gcd(d, q)
        if multiplier % q:
            multipliers.append((i, multiplier))
    particular = None
    if solvable:
        particular = tuple(sum(T_rows[k][i] * y[i] for i in range(n)) % q for k in range(n))
    kernel = tuple(tuple(T_rows[k][i] * multiplier % q for k in range(n)) for i, multiplier in multipliers)
    logger.debug("modular solve: %d x %d, invariant factors %s", len(A), n, factors)
    return ModularSolution(particular, kernel)


def module_order(generators: Sequence[Sequence[int]], p: int, N: int) -> int:
    """Number of elements of the Z/p^N-submodule spanned by ``generators``."""
    if not generators:
        return 1
    q = p**N
    D = smith_normal_form(_domain_matrix(generators, len(generators[0]), q))
    order = 1
    for d in _invariant_factors(D):
        order *= q // math.gcd(d, q)
    return order


def solve_linear_system(
    residual: Callable[[list[TruncatedSeries]], Sequence[TruncatedSeries]],
    unknowns: Sequence[tuple[type, PrecisionCtx]],
):
    """Solve residual(x) = 0 for an affine map of series unknowns, coordinatewise over Z/p^N.

    Returns ``(particular, kernel)``, where ``particular`` is a list of series or None and
    ``kernel`` is a list of such lists.
    """
    if not unknowns:
        return [], []
    ctx = unknowns[0][1]
    zero_point = [cls.zero(c) for cls, c in unknowns]
    base = _coordinates(residual(zero_point))
    columns = []
    for index, (cls, c) in enumerate(unknowns):
        for k in range(c.M):
            trial = list(zero_point)
            trial[index] = cls(c, [0] * k + [1])
            columns.append([(x - y) for x, y in zip(_coordinates(residual(trial)), base)])
    A = [list(row) for row in zip(*columns)] if base else []
    if not A:
        A = [[0] * len(columns)]
        base = [0]
    solution = solve_mod_prime_power(A, [-x for x in base], ctx.p, ctx.N)

    def _as_series(vector):
        out, offset = [], 0
        for cls, c in unknowns:
            out.append(cls(c, vector[offset : offset + c.M]))
            offset += c.M
        return out

    particular = None if solution.particular is None else _as_series(solution.particular)
    return particular, [_as_series(g) for g in solution.kernel]


def _coordinates(values: Sequence[TruncatedSeries]) -> list[int]:
    out = []
    for x in values:
        out.extend(x.coords)
    return out
