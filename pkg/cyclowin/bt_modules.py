"""BT modules (𝔐, φ) of E-height at most one and their equivalence with windows over 𝔖.

A BT module is a matrix A of φ in a fixed basis together with the witness B of A·B = B·A = E.
"""

import logging
import random
from dataclasses import dataclass

from .checks import CheckReport
from .exceptions import AxiomViolation, BadHom, NotAUnit
from .frames import Frame, FrameHom, FrameKind, LevelHom, RelabelHom
from .linalg import (
    Matrix,
    adjugate,
    determinant,
    diag,
    identity,
    mat_inverse,
    mat_map,
    mat_mul,
    mat_scale,
    matrix,
    submatrix,
    transpose,
)
from .padic_rings import TruncatedSeries
from .windows import Window, is_fv_isomorphism, random_invertible

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BTModule:
    frame: Frame
    A: Matrix
    B: Matrix

    def __post_init__(self):
        if self.frame.kind is not FrameKind.SIGMA:
            raise BadHom("BT modules live over a Breuil-Kisin frame")

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def E(self) -> TruncatedSeries:
        return self.frame.generators[0]


@dataclass(frozen=True)
class BTIso:
    """Certificate T: source → target with T·A_source = A_target·φ(T)."""

    source: BTModule
    target: BTModule
    T: Matrix

    def check(self, strict: bool = True) -> CheckReport:
        return bt_hom_check(self.T, self.source, self.target, strict=strict)


def bt_check(module: BTModule, strict: bool = True) -> CheckReport:
    report = CheckReport(f"bt[n={module.n}]")
    scalar = diag([module.E] * module.n)
    report.expect(mat_mul(module.A, module.B) == scalar, "A*B != E")
    report.expect(mat_mul(module.B, module.A) == scalar, "B*A != E")
    if strict:
        report.raise_for_failures()
    return report


def bt_hom_check(T: Matrix, source: BTModule, target: BTModule, strict: bool = True) -> CheckReport:
    report = CheckReport("bt-hom")
    phiT = mat_map(source.frame.phi, T)
    report.expect(mat_mul(T, source.A) == mat_mul(target.A, phiT), "T*A != A'*phi(T)")
    if strict:
        report.raise_for_failures()
    return report


def adjugate_certificate(module: BTModule) -> bool:
    """det(A)·B == E·adj(A); only attempted for rank at most three."""
    if module.n > 3:
        raise ValueError("the adjugate cross-check is limited to rank <= 3")
    return mat_scale(module.B, determinant(module.A)) == mat_scale(adjugate(module.A), module.E)


def _fil_diagonals(W: Window):
    frame = W.frame
    E = frame.generators[0]
    on_l = diag([E if t else frame.one() for t in W.types])
    on_n = diag([frame.one() if t else E for t in W.types])
    return on_l, on_n


def win_to_bt(W: Window) -> BTModule:
    """(Fil M, E·Φ_1) in the basis e_i (i in L), E·e_j (j in N)."""
    if W.frame.kind is not FrameKind.SIGMA:
        raise BadHom("win_to_bt needs a window over a Breuil-Kisin frame")
    on_l, on_n = _fil_diagonals(W)
    return BTModule(W.frame, mat_mul(on_l, W.psi), mat_mul(mat_inverse(W.psi), on_n))


@dataclass(frozen=True)
class NormalForm:
    rank: int
    R: Matrix
    C: Matrix
    a22: Matrix
    U: Matrix


def unit_pivot_form(module: BTModule) -> NormalForm:
    """R, C with R·B·C = diag(1, …, 1, B'') and no unit left in B''."""
    frame, n = module.frame, module.n
    one = frame.one()
    work = [list(row) for row in module.B]
    R = [list(row) for row in identity(frame.ring, frame.ctx, n)]
    C = [list(row) for row in identity(frame.ring, frame.ctx, n)]
    rank = 0
    for t in range(n):
        pivot = next(((i, j) for i in range(t, n) for j in range(t, n) if work[i][j].is_unit()), None)
        if pivot is None:
            break
        i, j = pivot
        work[t], work[i] = work[i], work[t]
        R[t], R[i] = R[i], R[t]
        for row in work:
            row[t], row[j] = row[j], row[t]
        for row in C:
            row[t], row[j] = row[j], row[t]
        inv = work[t][t].inverse()
        work[t] = [inv * x for x in work[t]]
        R[t] = [inv * x for x in R[t]]
        for i in range(n):
            if i != t and not work[i][t].is_zero():
                f = work[i][t]
                work[i] = [x - f * y for x, y in zip(work[i], work[t])]
                R[i] = [x - f * y for x, y in zip(R[i], R[t])]
        for j in range(n):
            if j != t and not work[t][j].is_zero():
                f = work[t][j]
                for row in work:
                    row[j] = row[j] - f * row[t]
                for row in C:
                    row[j] = row[j] - f * row[t]
        work[t][t] = one
        rank += 1
    R, C = matrix(R), matrix(C)
    a_prime = mat_mul(mat_mul(mat_inverse(C), module.A), mat_inverse(R))
    rest = list(range(rank, n))
    a22 = submatrix(a_prime, rest, rest)
    try:
        U = mat_inverse(a22) if rest else ()
    except NotAUnit:
        raise AxiomViolation("cokernel of the linearized Frobenius is not projective over S/E") from None
    logger.debug("unit pivot form: rank %d of %d", rank, n)
    return NormalForm(rank, R, C, a22, U)


def bt_to_win(module: BTModule) -> Window:
    """M = φ*𝔐 with Fil M = ψ(𝔐), Φ_1(ψ x) = 1 ⊗ x and Φ = 1 ⊗ φ."""
    return _bt_to_win(module, unit_pivot_form(module))


def _bt_to_win(module: BTModule, form: NormalForm) -> Window:
    frame, n, s = module.frame, module.n, form.rank
    phi = frame.phi
    diagonal = [[frame.one() if i == j else frame.zero() for j in range(n)] for i in range(n)]
    for x in range(s, n):
        for y in range(s, n):
            diagonal[x][y] = phi(form.a22[x - s][y - s])
    psi = mat_mul(mat_mul(form.R, mat_map(phi, form.C)), matrix(diagonal))
    return Window(frame, tuple(i < s for i in range(n)), psi)


def bt_roundtrip(module: BTModule) -> BTIso:
    """The canonical isomorphism 𝔐 → win_to_bt(bt_to_win(𝔐)), T = diag(1, U)·C^{-1}."""
    form = unit_pivot_form(module)
    W = _bt_to_win(module, form)
    n, s = module.n, form.rank
    frame = module.frame
    left = [[frame.one() if i == j else frame.zero() for j in range(n)] for i in range(n)]
    for x in range(s, n):
        for y in range(s, n):
            left[x][y] = form.U[x - s][y - s]
    T = mat_mul(matrix(left), mat_inverse(form.C))
    return BTIso(module, win_to_bt(W), T)


def window_roundtrip_iso(W: Window) -> tuple[Window, Matrix]:
    """bt_to_win(win_to_bt(W)) and the F/V-compatible isomorphism onto W."""
    module = win_to_bt(W)
    form = unit_pivot_form(module)
    back = _bt_to_win(module, form)
    H = mat_mul(W.psi, mat_inverse(form.R))
    if not is_fv_isomorphism(H, back, W):
        raise AxiomViolation("window round trip is not an isomorphism")
    return back, H


def bt_dual(module: BTModule) -> BTModule:
    """𝔐^t in the dual basis: A^t = B^T and B^t = A^T."""
    return BTModule(module.frame, transpose(module.B), transpose(module.A))


def bt_base_change(module: BTModule, h: FrameHom) -> BTModule:
    if not isinstance(h, (LevelHom, RelabelHom)):
        raise BadHom(f"BT base change is implemented along the level inclusion and lambda_rs, not {h.kind}")
    if h.source != module.frame:
        raise BadHom("module does not live over the source frame")
    return BTModule(h.target, mat_map(h.apply, module.A), mat_map(h.apply, module.B))


def supersingular_module(frame: Frame) -> BTModule:
    """Rank two with A = B = [[0, E], [1, 0]]."""
    E, zero, one = frame.generators[0], frame.zero(), frame.one()
    A = ((zero, E), (one, zero))
    return BTModule(frame, A, A)


def random_bt_module(frame: Frame, rng: random.Random, n: int, d: int | None = None, degree: int = 2) -> BTModule:
    """A = X·diag(E, …, E, 1, …, 1)·Y with d copies of E and the matching witness B."""
    d = rng.randrange(n + 1) if d is None else d
    E, one = frame.generators[0], frame.one()
    X = random_invertible(frame, n, rng, degree)
    Y = random_invertible(frame, n, rng, degree)
    middle_a = diag([E] * d + [one] * (n - d))
    middle_b = diag([one] * d + [E] * (n - d))
    A = mat_mul(mat_mul(X, middle_a), Y)
    B = mat_mul(mat_mul(mat_inverse(Y), middle_b), mat_inverse(X))
    return BTModule(frame, A, B)


def is_block_exact(extension: BTModule, sub: BTModule, quotient: BTModule) -> bool:
    """Whether ``extension`` is block upper triangular with ``sub`` and ``quotient`` on the diagonal."""
    k, n = sub.n, extension.n
    if k + quotient.n != n:
        return False
    top, bottom = list(range(k)), list(range(k, n))
    for X, Y, Z in ((extension.A, sub.A, quotient.A), (extension.B, sub.B, quotient.B)):
        if submatrix(X, top, top) != Y or submatrix(X, bottom, bottom) != Z:
            return False
        if any(not x.is_zero() for row in submatrix(X, bottom, top) for x in row):
            return False
    return True
