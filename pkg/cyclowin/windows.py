"""Windows over frames through normal decompositions.

A window is stored as a basis type mask (True for basis vectors of L, False for N) and the
invertible matrix Ψ whose column j is Φ_1(e_j) for e_j in L and Φ(e_j) for e_j in N.  Fil M is
never materialised: L ⊕ (Fil S)N is all the filtration data there is.

Maps between windows are :class:`FilteredMatrix` objects.  Entries in rows of type N and columns
of type L must lie in Fil S and carry their :class:`~cyclowin.frames.FilElement` witness, which
makes the divided Frobenius of the map exact.
"""

import logging
import random
from dataclasses import dataclass
from typing import Sequence

from .checks import CheckReport
from .exceptions import NotAUnit, NotInD1
from .frames import Frame, FilElement, FrameHom, FrameKind, LambdaHom, script_frame, sigma_frame, zp_frame
from .linalg import (
    Matrix,
    diag,
    identity,
    is_zero_matrix,
    mat_add,
    mat_inverse,
    mat_map,
    mat_mul,
    mat_scale,
    mat_sub,
    matrix,
    module_order,
    solve_linear_system,
    solve_mod_prime_power,
    transpose,
)
from .padic_rings import PrecisionCtx, TruncatedSeries, element_y, random_unit

logger = logging.getLogger(__name__)

Types = tuple[bool, ...]


def frame_at(frame: Frame, ctx: PrecisionCtx) -> Frame:
    """The frame of the same kind at another precision."""
    if frame.kind is FrameKind.SIGMA:
        return sigma_frame(ctx, frame.var_level)
    if frame.kind is FrameKind.SCRIPT:
        return script_frame(ctx)
    return zp_frame(ctx)


@dataclass(frozen=True)
class FilteredMatrix:
    """Matrix of a map M1 → M2; ``rows`` are the types of M2 and ``cols`` those of M1."""

    frame: Frame
    rows: Types
    cols: Types
    entries: tuple[tuple[TruncatedSeries | FilElement, ...], ...]

    def is_witness_position(self, i: int, j: int) -> bool:
        return not self.rows[i] and self.cols[j]

    @classmethod
    def build(cls, frame: Frame, rows: Types, cols: Types, entry) -> "FilteredMatrix":
        """Fill from ``entry(i, j)``; witness positions must return a FilElement."""
        return cls(frame, rows, cols, tuple(tuple(entry(i, j) for j in range(len(cols))) for i in range(len(rows))))

    @classmethod
    def from_values(cls, frame: Frame, rows: Types, cols: Types, values: Matrix) -> "FilteredMatrix":
        """Lift a plain matrix whose witness positions vanish."""

        def entry(i, j):
            if not rows[i] and cols[j]:
                if not values[i][j].is_zero():
                    raise NotInD1(f"entry ({i}, {j}) needs a Fil witness")
                return frame.fil()
            return frame.element(values[i][j])

        return cls.build(frame, rows, cols, entry)

    @classmethod
    def identity(cls, frame: Frame, types: Types) -> "FilteredMatrix":
        return cls.from_values(frame, types, types, identity(frame.ring, frame.ctx, len(types)))

    @classmethod
    def scalar(cls, frame: Frame, types: Types, s: TruncatedSeries) -> "FilteredMatrix":
        return cls.identity(frame, types).scale(s)

    def values(self) -> Matrix:
        return matrix(
            [x.value() if isinstance(x, FilElement) else x for x in row] for row in self.entries
        )

    def hat(self) -> Matrix:
        """Ĥ: φ on LL and NN blocks, ϖφ on the LN block, φ_1 of the witness on the NL block."""
        frame = self.frame
        out = []
        for i, row in enumerate(self.entries):
            out_row = []
            for j, x in enumerate(row):
                if isinstance(x, FilElement):
                    out_row.append(x.phi1())
                elif self.rows[i] and not self.cols[j]:
                    out_row.append(frame.varpi * frame.phi(x))
                else:
                    out_row.append(frame.phi(x))
            out.append(tuple(out_row))
        return tuple(out)

    def scale(self, s) -> "FilteredMatrix":
        entries = tuple(tuple(x * s for x in row) for row in self.entries)
        return FilteredMatrix(self.frame, self.rows, self.cols, entries)

    def __add__(self, other: "FilteredMatrix") -> "FilteredMatrix":
        entries = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        return FilteredMatrix(self.frame, self.rows, self.cols, entries)

    def __sub__(self, other: "FilteredMatrix") -> "FilteredMatrix":
        return self + other.scale(-1)

    def __matmul__(self, other: "FilteredMatrix") -> "FilteredMatrix":
        """Composite self ∘ other."""
        frame = self.frame
        inner = other.rows

        def entry(i, j):
            if not self.rows[i] and other.cols[j]:
                total = frame.fil()
                for k in range(len(inner)):
                    a, b = self.entries[i][k], other.entries[k][j]
                    total = total + (a * b if isinstance(a, FilElement) else b * a)
                return total
            total = frame.zero()
            for k in range(len(inner)):
                a, b = self.entries[i][k], other.entries[k][j]
                a = a.value() if isinstance(a, FilElement) else a
                b = b.value() if isinstance(b, FilElement) else b
                total = total + a * b
            return total

        return FilteredMatrix.build(frame, self.rows, other.cols, entry)

    def inverse(self) -> "FilteredMatrix":
        """Inverse of an isomorphism of filtered modules, with witnesses from the block formula."""
        values = self.values()
        inv = mat_inverse(values)
        L2 = [i for i, t in enumerate(self.rows) if t]
        N2 = [i for i, t in enumerate(self.rows) if not t]
        L1 = [j for j, t in enumerate(self.cols) if t]
        N1 = [j for j, t in enumerate(self.cols) if not t]
        witnesses = {}
        if N1 and L2:
            a = matrix([values[i][j] for j in L1] for i in L2)
            b = matrix([values[i][j] for j in N1] for i in L2)
            g = matrix([values[i][j] for j in L1] for i in N2)
            d_inv = mat_inverse(matrix([values[i][j] for j in N1] for i in N2))
            schur_inv = mat_inverse(mat_sub(a, mat_mul(mat_mul(b, d_inv), g)))
            for x, row in enumerate(N1):
                for y, col in enumerate(L2):
                    total = self.frame.fil()
                    for k, gi in enumerate(N2):
                        for m, gj in enumerate(L1):
                            coefficient = -(d_inv[x][k] * schur_inv[m][y])
                            if not coefficient.is_zero():
                                total = total + self.entries[gi][gj] * coefficient
                    witnesses[(row, col)] = total

        def entry(i, j):
            if (i, j) in witnesses:
                return witnesses[(i, j)]
            return inv[i][j]

        return FilteredMatrix.build(self.frame, self.cols, self.rows, entry)

    def dual_transpose(self) -> "FilteredMatrix":
        """Transpose read on dual modules, whose types are negated."""
        rows = tuple(not t for t in self.cols)
        cols = tuple(not t for t in self.rows)
        return FilteredMatrix.build(self.frame, rows, cols, lambda i, j: self.entries[j][i])

    def map_hom(self, h: FrameHom) -> "FilteredMatrix":
        def entry(i, j):
            x = self.entries[i][j]
            return h.apply_fil(x) if isinstance(x, FilElement) else h.apply(x)

        return FilteredMatrix.build(h.target, self.rows, self.cols, entry)

    def map_ring(self, ring_map, fil_map) -> "FilteredMatrix":
        def entry(i, j):
            x = self.entries[i][j]
            return fil_map(x) if isinstance(x, FilElement) else ring_map(x)

        return FilteredMatrix.build(self.frame, self.rows, self.cols, entry)


@dataclass(frozen=True)
class Window:
    frame: Frame
    types: Types
    psi: Matrix

    @property
    def n(self) -> int:
        return len(self.types)

    @property
    def dL(self) -> int:
        return sum(self.types)

    def varpi_diagonal(self) -> Matrix:
        return diag([self.frame.varpi if t else self.frame.one() for t in self.types])

    def phi(self, vector: Sequence[TruncatedSeries]) -> tuple[TruncatedSeries, ...]:
        """Φ on a vector of coordinates."""
        F, _ = fv_pair(self)
        return tuple(row[0] for row in mat_mul(F, tuple((self.frame.phi(x),) for x in vector)))

    def phi1(self, l_part: Sequence[TruncatedSeries], n_part: Sequence[FilElement]) -> tuple[TruncatedSeries, ...]:
        """Φ_1 of Σ a_i e_i (e_i in L) + Σ f_j e_j (e_j in N, f_j in Fil S)."""
        images = []
        l_iter, n_iter = iter(l_part), iter(n_part)
        for t in self.types:
            images.append(self.frame.phi(next(l_iter)) if t else next(n_iter).phi1())
        return tuple(row[0] for row in mat_mul(self.psi, tuple((x,) for x in images)))


@dataclass(frozen=True)
class WindowHom:
    source: Window
    target: Window
    matrix: FilteredMatrix
    hom: FrameHom | None = None

    def check(self, strict: bool = True) -> CheckReport:
        return window_hom_check(self, strict=strict)

    def compose(self, first: "WindowHom") -> "WindowHom":
        if self.hom is not None or first.hom is not None:
            raise ValueError("only homomorphisms over a single frame compose directly")
        return WindowHom(first.source, self.target, self.matrix @ first.matrix)


def unit_window(frame: Frame) -> Window:
    """(S, Fil S, φ, φ_1): rank one with the basis vector in N."""
    return Window(frame, (False,), ((frame.one(),),))


def dual_unit_window(frame: Frame) -> Window:
    """(S, S, ϖφ, φ): rank one with the basis vector in L."""
    return Window(frame, (True,), ((frame.one(),),))


def fv_pair(W: Window) -> tuple[Matrix, Matrix]:
    """Linearizations F of Φ and V with V(Φ_1(m)) = 1 ⊗ m; FV = VF = ϖ."""
    F = mat_mul(W.psi, W.varpi_diagonal())
    co_diagonal = diag([W.frame.one() if t else W.frame.varpi for t in W.types])
    V = mat_mul(co_diagonal, mat_inverse(W.psi))
    return F, V


def window_check(W: Window, rng: random.Random | None = None, samples: int = 3, strict: bool = True) -> CheckReport:
    rng = rng or random.Random(0)
    report = CheckReport(f"window[{W.frame.kind.value}, n={W.n}, dL={W.dL}]")
    frame = W.frame
    shape_ok = len(W.psi) == W.n and all(len(row) == W.n for row in W.psi)
    if not report.expect(shape_ok, "Psi has the wrong shape"):
        return report.raise_for_failures() if strict else report
    try:
        F, V = fv_pair(W)
    except NotAUnit:
        report.expect(False, "Psi is not invertible")
        return report.raise_for_failures() if strict else report
    scalar = diag([frame.varpi] * W.n)
    report.expect(mat_mul(F, V) == scalar, "FV != varpi")
    report.expect(mat_mul(V, F) == scalar, "VF != varpi")
    for _ in range(samples):
        l_part = [frame.random_element(rng, 4) for _ in range(W.dL)]
        n_part = [frame.random_fil(rng, 4) for _ in range(W.n - W.dL)]
        vector, l_iter, n_iter = [], iter(l_part), iter(n_part)
        for t in W.types:
            vector.append(next(l_iter) if t else next(n_iter).value())
        lhs = W.phi(vector)
        rhs = tuple(frame.varpi * x for x in W.phi1(l_part, n_part))
        report.expect(lhs == rhs, "Phi != varpi * Phi1 on a random element of Fil M")
        s = frame.random_fil(rng, 3)
        j = rng.randrange(W.n)
        basis = [frame.zero()] * W.n
        basis[j] = frame.one()
        l_part = [s.value() if k == j else frame.zero() for k in range(W.n) if W.types[k]]
        n_part = [s if k == j else frame.fil() for k in range(W.n) if not W.types[k]]
        lhs = W.phi1(l_part, n_part)
        rhs = tuple(s.phi1() * x for x in W.phi(basis))
        report.expect(lhs == rhs, "Phi1(s m) != phi1(s) Phi(m)")
    if strict:
        report.raise_for_failures()
    return report


def dual(W: Window) -> Window:
    """M^t with the dual basis: types negated and Ψ^t = (Ψ^{-1})^T."""
    return Window(W.frame, tuple(not t for t in W.types), transpose(mat_inverse(W.psi)))


def c_diagonal(frame: Frame, types: Types, c: TruncatedSeries) -> Matrix:
    return diag([frame.element(c) if t else frame.one() for t in types])


def base_change(W: Window, h: FrameHom) -> Window:
    """α*W: Ψ' = α(Ψ) D_c with D_c = diag(c on L, 1 on N)."""
    if W.frame != h.source:
        raise ValueError("window does not live over the source of the homomorphism")
    psi = mat_mul(mat_map(h.apply, W.psi), c_diagonal(h.target, W.types, h.c))
    return Window(h.target, W.types, psi)


def canonical_base_change_map(W: Window, h: FrameHom) -> WindowHom:
    """The h-homomorphism M → S' ⊗ M."""
    target = base_change(W, h)
    return WindowHom(W, target, FilteredMatrix.identity(h.target, W.types), h)


def twist(W: Window, s: TruncatedSeries) -> Window:
    """Window with Ψ multiplied by a unit scalar."""
    return Window(W.frame, W.types, mat_scale(W.psi, W.frame.element(s)))


def dual_twist_iso(W: Window) -> WindowHom:
    """Multiplication by y = u0/t, an isomorphism λ*(W^t) → (λ*W)^t."""
    lam = LambdaHom(W.frame)
    source = base_change(dual(W), lam)
    target = dual(base_change(W, lam))
    y = element_y(W.frame.ctx)
    return WindowHom(source, target, FilteredMatrix.scalar(lam.target, source.types, y))


def window_hom_check(f: WindowHom, strict: bool = True) -> CheckReport:
    """Ψ_2 Ĥ = H α(Ψ_1) D_c, with witnesses matching the values."""
    report = CheckReport("window-hom")
    H = f.matrix
    frame = f.target.frame
    c = f.hom.c if f.hom is not None else frame.one()
    source_psi = f.source.psi if f.hom is None else mat_map(f.hom.apply, f.source.psi)
    report.expect(H.rows == f.target.types and H.cols == f.source.types, "matrix types do not match the windows")
    lhs = mat_mul(f.target.psi, H.hat())
    rhs = mat_mul(mat_mul(H.values(), source_psi), c_diagonal(frame, f.source.types, c))
    report.expect(lhs == rhs, "Psi2 * Hhat != H * Psi1 * D_c")
    if strict:
        report.raise_for_failures()
    return report


def is_fv_isomorphism(H: Matrix, source: Window, target: Window) -> bool:
    """H intertwines F and V and is invertible."""
    Fs, Vs = fv_pair(source)
    Ft, Vt = fv_pair(target)
    phiH = mat_map(target.frame.phi, H)
    try:
        mat_inverse(H)
    except NotAUnit:
        return False
    return mat_mul(H, Fs) == mat_mul(Ft, phiH) and mat_mul(Vt, H) == mat_mul(phiH, Vs)


def _unknown_layout(frame: Frame, rows: Types, cols: Types):
    """Unknown series for a filtered matrix: one per entry, one per generator at witness positions."""
    layout, slots = [], []
    for i in range(len(rows)):
        for j in range(len(cols)):
            count = len(frame.generators) if (not rows[i] and cols[j]) else 1
            slots.append((i, j, len(layout), count))
            layout.extend([(frame.ring, frame.ctx)] * count)
    return layout, slots


def _assemble(frame: Frame, rows: Types, cols: Types, slots, values) -> FilteredMatrix:
    table = {}
    for i, j, offset, count in slots:
        if not rows[i] and cols[j]:
            table[(i, j)] = FilElement(frame, tuple(values[offset : offset + count]))
        else:
            table[(i, j)] = values[offset]
    return FilteredMatrix.build(frame, rows, cols, lambda i, j: table[(i, j)])


def solve_filtered(frame: Frame, rows: Types, cols: Types, residual):
    """Solve residual(H) = 0 for a filtered matrix H; ``residual`` returns a matrix."""
    layout, slots = _unknown_layout(frame, rows, cols)

    def flat(values):
        out = residual(_assemble(frame, rows, cols, slots, values))
        return [x for row in out for x in row]

    particular, kernel = solve_linear_system(flat, layout)
    as_matrix = lambda values: _assemble(frame, rows, cols, slots, values)  # noqa: E731
    return (None if particular is None else as_matrix(particular)), [as_matrix(k) for k in kernel]


def hom_solve(W1: Window, W2: Window) -> list[WindowHom]:
    """Generators of Hom(W1, W2) at working precision.

    Kernel vectors whose matrix values all vanish only relate Fil witnesses (E·k = 0 at
    precision); they are dropped, so every returned homomorphism has a nonzero value matrix.
    """
    if W1.frame != W2.frame:
        raise ValueError("hom_solve needs windows over one frame")

    def residual(H: FilteredMatrix) -> Matrix:
        return mat_sub(mat_mul(W2.psi, H.hat()), mat_mul(H.values(), W1.psi))

    _, kernel = solve_filtered(W1.frame, W2.types, W1.types, residual)
    homs = [WindowHom(W1, W2, H) for H in kernel if not is_zero_matrix(H.values())]
    logger.debug("hom_solve found %d generators (%d witness syzygies dropped)", len(homs), len(kernel) - len(homs))
    return homs


def hom_module_order(homs: Sequence[WindowHom]) -> int:
    """Size of the Z/p^N-module spanned by the value matrices of the given homomorphisms."""
    if not homs:
        return 1
    ctx = homs[0].source.frame.ctx
    vectors = [[c for row in f.matrix.values() for x in row for c in x.coords] for f in homs]
    return module_order(vectors, ctx.p, ctx.N)


def reduce_mod_pn(W: Window, n: int) -> Window:
    ctx = W.frame.ctx
    if not 1 <= n <= ctx.N:
        raise ValueError(f"need 1 <= n <= {ctx.N}")
    frame = frame_at(W.frame, ctx.mod_pn(n))
    return Window(frame, W.types, mat_map(lambda x: x.reduce(frame.ctx), W.psi))


def lift_matrix(A: Matrix, frame: Frame) -> Matrix:
    return mat_map(lambda x: x.lift_to(frame.ctx), A)


def d1_from_gamma(W_bar: Window, gamma: Matrix) -> tuple[Matrix, Matrix]:
    """The pair (G, G1) of D^1 whose effect on Ψ is the column matrix ``gamma``."""
    frame = W_bar.frame
    g0 = frame.phi1_generators[0]
    G_cols, G1_cols = [], []
    for j, t in enumerate(W_bar.types):
        col = [row[j] for row in gamma]
        if t:
            G_cols.append([frame.varpi * x for x in col])
            G1_cols.append(col)
        else:
            G_cols.append(col)
            G1_cols.append([g0 * x for x in col])
    return transpose(matrix(G_cols)), transpose(matrix(G1_cols))


def gamma_from_d1(W_bar: Window, G: Matrix, G1: Matrix) -> Matrix:
    """Validate (G, G1) ∈ D^1 and return its column matrix."""
    frame = W_bar.frame
    g0 = frame.phi1_generators[0]
    cols = []
    for j, t in enumerate(W_bar.types):
        g_col = [row[j] for row in G]
        g1_col = [row[j] for row in G1]
        if t:
            if g_col != [frame.varpi * x for x in g1_col]:
                raise NotInD1(f"G != varpi * G1 on the Fil basis vector {j}")
            cols.append(g1_col)
        else:
            if g1_col != [g0 * x for x in g_col]:
                raise NotInD1(f"G1 != phi1(g) * G on the basis vector {j}")
            cols.append(g_col)
    return transpose(matrix(cols))


def lift_window(W_n: Window, G: Matrix, G1: Matrix) -> Window:
    """Lift of W_n to precision p^(n+1): the base-point lift moved by (p^n G, p^n G1).

    ``G`` and ``G1`` live over the frame reduced mod p.
    """
    n = W_n.frame.ctx.N
    frame = frame_at(W_n.frame, W_n.frame.ctx.mod_pn(n + 1))
    W_bar = reduce_mod_pn(W_n, 1)
    gamma = gamma_from_d1(W_bar, G, G1)
    psi = mat_add(lift_matrix(W_n.psi, frame), mat_scale(lift_matrix(gamma, frame), frame.ctx.p**n))
    return Window(frame, W_n.types, psi)


def torsor_action(W: Window, G: Matrix, G1: Matrix, n: int) -> Window:
    """Move a lift W (precision p^(n+1)) of its reduction mod p^n by (p^n G, p^n G1) ∈ D^1."""
    frame = W.frame
    if frame.ctx.N != n + 1:
        raise ValueError(f"the torsor over lifts of level {n} acts on windows mod p^{n + 1}")
    gamma = gamma_from_d1(reduce_mod_pn(W, 1), G, G1)
    return Window(frame, W.types, mat_add(W.psi, mat_scale(lift_matrix(gamma, frame), frame.ctx.p**n)))


def coboundary(W_bar: Window, alpha: FilteredMatrix) -> Matrix:
    """d(α) = Ψ̄ α̂ − α Ψ̄ for an endomorphism α of the reduction mod p."""
    return mat_sub(mat_mul(W_bar.psi, alpha.hat()), mat_mul(alpha.values(), W_bar.psi))


def lift_difference(W_a: Window, W_b: Window, n: int) -> Matrix:
    """(Ψ_a − Ψ_b) / p^n reduced mod p, for two lifts of one window mod p^n."""
    frame_bar = frame_at(W_a.frame, W_a.frame.ctx.mod_pn(1))
    diff = mat_sub(W_a.psi, W_b.psi)
    return mat_map(lambda x: x.exact_div_int(W_a.frame.ctx.p**n, frame_bar.ctx), diff)


def lifts_isomorphic(W_a: Window, W_b: Window, n: int) -> FilteredMatrix | None:
    """α with 1 + p^n α : W_a → W_b an isomorphism of lifts, or None."""
    W_bar = reduce_mod_pn(W_a, 1)
    delta = lift_difference(W_a, W_b, n)

    def residual(alpha: FilteredMatrix) -> Matrix:
        return mat_sub(coboundary(W_bar, alpha), delta)

    particular, _ = solve_filtered(W_bar.frame, W_bar.types, W_bar.types, residual)
    return particular


def lift_isomorphism(W_a: Window, W_b: Window, n: int, alpha: FilteredMatrix) -> WindowHom:
    """The homomorphism 1 + p^n α at precision p^(n+1)."""
    frame = W_a.frame

    def entry(i, j):
        x = alpha.entries[i][j]
        if isinstance(x, FilElement):
            return FilElement(frame, tuple(k.lift_to(frame.ctx) * frame.ctx.p**n for k in x.cofactors))
        value = x.lift_to(frame.ctx) * frame.ctx.p**n
        return value + 1 if i == j else value

    H = FilteredMatrix.build(frame, W_a.types, W_a.types, entry)
    return WindowHom(W_a, W_b, H)


def hom_reduces_to_identity(W_a: Window, W_b: Window, n: int) -> bool:
    """Whether Hom(W_a, W_b) holds a map congruent to the identity mod p^n (via hom_solve)."""
    homs = hom_solve(W_a, W_b)
    ctx = W_a.frame.ctx
    target = []
    for i in range(W_a.n):
        for j in range(W_a.n):
            target.extend(((1 if (i == j and k == 0) else 0) for k in range(ctx.M)))
    columns = []
    for f in homs:
        col = []
        for row in f.matrix.values():
            for x in row:
                col.extend(x.coords)
        columns.append(col)
    if not columns:
        return False
    A = [list(row) for row in zip(*columns)]
    return solve_mod_prime_power(A, target, ctx.p, n).particular is not None


def random_invertible(frame: Frame, n: int, rng: random.Random, degree: int = 3) -> Matrix:
    def triangular(below):
        def entry(i, j):
            if i == j:
                return frame.one()
            return frame.random_element(rng, degree) if (i > j) == below else frame.zero()

        return matrix([entry(i, j) for j in range(n)] for i in range(n))

    lower, upper = triangular(True), triangular(False)
    units = diag([random_unit(frame.ring, frame.ctx, rng, degree) for _ in range(n)])
    return mat_mul(mat_mul(lower, units), upper)


def random_window(frame: Frame, rng: random.Random, n: int, dL: int | None = None, degree: int = 3) -> Window:
    dL = rng.randrange(n + 1) if dL is None else dL
    types = [True] * dL + [False] * (n - dL)
    rng.shuffle(types)
    return Window(frame, tuple(types), random_invertible(frame, n, rng, degree))


def is_zero_hom(f: WindowHom) -> bool:
    return is_zero_matrix(f.matrix.values())
