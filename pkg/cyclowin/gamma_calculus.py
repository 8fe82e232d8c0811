"""Γ-actions on windows and BT modules.

Γ is seen only through χ: an action is a list of (χ, G) pairs where G is the matrix of the
semilinear automorphism γ over the ring automorphism u ↦ (1+u)^χ - 1.  On windows G is a
:class:`~cyclowin.windows.FilteredMatrix`, so that the c_γ-homomorphism condition can be checked
with exact φ_1; on BT modules it is a plain matrix commuting with φ.

Actions built by the zoo carry a ``recipe`` that rebuilds them at another precision or for other
values of χ.  The monodromy operator N_M needs it for guard digits.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .bt_modules import BTModule, bt_dual, bt_roundtrip, bt_to_win, unit_pivot_form, win_to_bt, window_roundtrip_iso
from .checks import CheckReport
from .exceptions import (
    BadHom,
    BudgetExceeded,
    NoSmallGenerator,
    NotNilpotent,
    NotStrict,
    PrecisionUnavailable,
)
from .frames import FilElement, FrameHom, FrameKind, LambdaHom, hom_gamma
from .linalg import (
    Matrix,
    column,
    is_invertible,
    mat_add,
    mat_inverse,
    mat_map,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
    matrix,
    solve_linear_system,
    submatrix,
    transpose,
)
from .padic_rings import (
    Lift,
    PrecisionCtx,
    ScriptSeries,
    SigmaSeries,
    TruncatedSeries,
    divided_power_E,
    element_t,
    fil_generator_degrees,
    gamma_ratio_E,
    n_max,
    normalize_chi,
    padic_log,
    teichmuller,
    valuation,
    variable,
)
from .windows import FilteredMatrix, Window, WindowHom, base_change, dual, fv_pair, window_hom_check

logger = logging.getLogger(__name__)

Carrier = Window | BTModule
Recipe = Callable[[PrecisionCtx, tuple[int, ...]], "GammaAction"]


@dataclass(frozen=True)
class GammaAction:
    carrier: Carrier
    generators: tuple[tuple[int, FilteredMatrix | Matrix], ...]
    recipe: Recipe | None = field(default=None, compare=False, repr=False)

    @property
    def ctx(self) -> PrecisionCtx:
        return self.carrier.frame.ctx

    @property
    def chis(self) -> tuple[int, ...]:
        return tuple(chi for chi, _ in self.generators)

    @property
    def on_window(self) -> bool:
        return isinstance(self.carrier, Window)

    def matrix_for(self, chi: int) -> FilteredMatrix | Matrix:
        """The matrix of γ_χ, rebuilding through the recipe when χ is not a listed generator."""
        target = normalize_chi(self.ctx, chi)
        for listed, G in self.generators:
            if normalize_chi(self.ctx, listed) == target:
                return G
        if self.recipe is None:
            raise PrecisionUnavailable(f"no generator for chi={chi} and no recipe to build one")
        return self.recipe(self.ctx, (chi,)).generators[0][1]

    def values(self, chi: int) -> Matrix:
        G = self.matrix_for(chi)
        return G.values() if isinstance(G, FilteredMatrix) else G

    def rebuilt(self, ctx: PrecisionCtx, chis: Sequence[int] | None = None) -> "GammaAction":
        if self.recipe is None:
            raise PrecisionUnavailable("this action cannot be rebuilt at another precision")
        return self.recipe(ctx, tuple(self.chis if chis is None else chis))


def _transported(act: GammaAction, transform) -> Recipe | None:
    if act.recipe is None:
        return None
    recipe = act.recipe
    return lambda ctx, chis: transform(recipe(ctx, chis))


def default_chis(ctx: PrecisionCtx) -> tuple[int, ...]:
    """ω (a Teichmüller generator of the torsion), 1 + p, and 1 + p^r when r > 1."""
    chis = [teichmuller(ctx), 1 + ctx.p]
    if ctx.r > 1:
        chis.append(1 + ctx.p**ctx.r)
    return tuple(chis)


def gamma_vector(v: Sequence[TruncatedSeries], chi: int) -> tuple[TruncatedSeries, ...]:
    return tuple(x.gamma(chi) for x in v)


def gamma_matrix(A: Matrix, chi: int) -> Matrix:
    return mat_map(lambda x: x.gamma(chi), A)


@dataclass(frozen=True)
class Lambda:
    chi: int
    value: SigmaSeries


@lru_cache(maxsize=256)
def lambda_gamma(ctx: PrecisionCtx, chi: int) -> Lambda:
    """λ_γ = ∏_{n>=0} φ^n(E/γ(E)); a factor is 1 once φ^n(u) vanishes at precision."""
    if ctx.lift is not Lift.CYCLOTOMIC:
        raise BadHom("λ_γ is defined for the cyclotomic Frobenius")
    factor = gamma_ratio_E(ctx, chi).inverse()
    value = SigmaSeries.one(ctx)
    u_image = variable(ctx)
    steps = 0
    while not u_image.is_zero():
        value = value * factor
        factor = factor.frobenius()
        u_image = u_image.frobenius()
        steps += 1
    logger.debug("lambda_gamma(chi=%s) used %d factors", chi, steps)
    return Lambda(chi, value)


def action_check(act: GammaAction, strict: bool = True) -> CheckReport:
    """Each generator is a γ-semilinear automorphism, and the generators commute."""
    report = CheckReport(f"gamma-action[{len(act.generators)}]")
    carrier = act.carrier
    for chi, G in act.generators:
        if act.on_window:
            f = WindowHom(carrier, carrier, G, hom_gamma(carrier.frame, chi))
            report.merge(window_hom_check(f, strict=False))
            report.expect(is_invertible(G.values()), f"generator chi={chi} is not invertible")
        else:
            phiG = mat_map(carrier.frame.phi, G)
            ok = mat_mul(carrier.A, phiG) == mat_mul(G, gamma_matrix(carrier.A, chi))
            report.expect(ok, f"A*phi(G) != G*gamma(A) for chi={chi}")
            report.expect(is_invertible(G), f"generator chi={chi} is not invertible")
    for a, (chi1, _) in enumerate(act.generators):
        for chi2, _ in act.generators[a + 1 :]:
            G1, G2 = act.values(chi1), act.values(chi2)
            lhs = mat_mul(G1, gamma_matrix(G2, chi1))
            rhs = mat_mul(G2, gamma_matrix(G1, chi2))
            report.expect(lhs == rhs, f"generators chi={chi1} and chi={chi2} do not commute")
    if strict:
        report.raise_for_failures()
    return report


def _multiplicative_order(chi: int, p: int, s: int) -> int:
    if s == 0:
        return 1
    modulus = p**s
    k, value = 1, chi % modulus
    while value != 1 % modulus:
        value = value * chi % modulus
        k += 1
    return k


def strictness_check(act: GammaAction, s: int = 0) -> bool:
    """Whether Γ_s = {χ ≡ 1 mod p^s} acts trivially modulo u.

    A generator χ contributes its smallest power in Γ_s; modulo u the ring action is trivial, so
    that power acts by G(0)^k.
    """
    ctx = act.ctx
    q = ctx.modulus
    n = len(act.carrier.types) if act.on_window else act.carrier.n
    unit = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for chi, _ in act.generators:
        k = _multiplicative_order(chi, ctx.p, s)
        G0 = [[x.constant_term for x in row] for row in act.values(chi)]
        power = unit
        for _ in range(k):
            power = [[sum(a * b for a, b in zip(row, col)) % q for col in zip(*G0)] for row in power]
        if power != unit:
            logger.debug("generator chi=%s is not trivial mod u on Gamma_%d", chi, s)
            return False
    return True


def twist_action(act: GammaAction, exponent: int = 1) -> GammaAction:
    """Multiply γ_χ by ω(χ)^exponent, ω the Teichmüller character."""
    ctx = act.ctx
    generators = []
    for chi, G in act.generators:
        a = pow(teichmuller(ctx, chi % ctx.p), exponent, ctx.modulus)
        generators.append((chi, G.scale(a) if isinstance(G, FilteredMatrix) else mat_scale(G, a)))
    return GammaAction(act.carrier, tuple(generators), _transported(act, lambda a: twist_action(a, exponent)))


def act_dual(act: GammaAction) -> GammaAction:
    """Dual action: λ_γ·G^{-T} on BT modules, φ(λ_γ)·G^{-T} on 𝔖-windows, G^{-T} on S-windows."""
    carrier, ctx = act.carrier, act.ctx
    generators = []
    if not act.on_window:
        for chi, G in act.generators:
            lam = lambda_gamma(ctx, chi).value
            generators.append((chi, mat_scale(transpose(mat_inverse(G)), lam)))
        dual_carrier = bt_dual(carrier)
    else:
        for chi, G in act.generators:
            H = G.inverse().dual_transpose()
            if carrier.frame.kind is FrameKind.SIGMA:
                H = H.scale(lambda_gamma(ctx, chi).value.frobenius())
            generators.append((chi, H))
        dual_carrier = dual(carrier)
    return GammaAction(dual_carrier, tuple(generators), _transported(act, act_dual))


def act_win_to_bt(act: GammaAction) -> GammaAction:
    """Transfer to 𝔐 = Fil M: γ_𝔐 = (E/γ(E))·γ_M restricted to Fil M."""
    W, ctx = act.carrier, act.ctx
    if not act.on_window or W.frame.kind is not FrameKind.SIGMA:
        raise BadHom("act_win_to_bt needs an action on a window over a Breuil-Kisin frame")
    E = W.frame.generators[0]
    generators = []
    for chi, G in act.generators:
        w_inv = gamma_ratio_E(ctx, chi).inverse()
        rows = []
        for i, ti in enumerate(W.types):
            row = []
            for j, tj in enumerate(W.types):
                x = G.entries[i][j]
                if ti and tj:
                    row.append(w_inv * x)
                elif ti:
                    row.append(E * x)
                elif tj:
                    row.append(w_inv * x.cofactors[0])
                else:
                    row.append(x)
            rows.append(tuple(row))
        generators.append((chi, tuple(rows)))
    return GammaAction(win_to_bt(W), tuple(generators), _transported(act, act_win_to_bt))


def act_bt_to_win(act: GammaAction) -> GammaAction:
    """Transfer to M = φ*𝔐: γ ⊗ γ_𝔐, written in the normal-decomposition basis of bt_to_win."""
    module, ctx = act.carrier, act.ctx
    if act.on_window:
        raise BadHom("act_bt_to_win needs an action on a BT module")
    frame, n = module.frame, module.n
    form = unit_pivot_form(module)
    W = bt_to_win(module)
    s = form.rank
    R_inv, C_inv = mat_inverse(form.R), mat_inverse(form.C)
    rest, head = list(range(s, n)), list(range(s))
    generators = []
    for chi, G in act.generators:
        values = mat_mul(mat_mul(form.R, mat_map(frame.phi, G)), gamma_matrix(R_inv, chi))
        w = gamma_ratio_E(ctx, chi)
        X = mat_mul(mat_mul(C_inv, G), gamma_matrix(form.C, chi))
        K = mat_mul(form.U, submatrix(X, rest, head)) if rest and head else ()

        def entry(i, j, values=values, K=K, w=w):
            if i >= s and j < s:
                return FilElement(frame, (w * K[i - s][j],))
            return values[i][j]

        generators.append((chi, FilteredMatrix.build(frame, W.types, W.types, entry)))
    return GammaAction(W, tuple(generators), _transported(act, act_bt_to_win))


def act_base_change(act: GammaAction, h: FrameHom) -> GammaAction:
    """Action on h*W, G' = h(G); valid along λ and along strict homomorphisms commuting with Γ."""
    if not act.on_window:
        raise BadHom("act_base_change acts on windows")
    generators = tuple((chi, G.map_hom(h)) for chi, G in act.generators)
    recipe = None
    if act.recipe is not None and isinstance(h, LambdaHom):
        recipe = _transported(act, lambda a: act_base_change(a, LambdaHom(a.carrier.frame)))
    return GammaAction(base_change(act.carrier, h), generators, recipe)


def transport_action(act: GammaAction, f: WindowHom) -> GammaAction:
    """Carry an action along an isomorphism f of windows over one frame: H G H^{-1} twisted by γ."""
    H = f.matrix
    H_inv = H.inverse()
    generators = []
    for chi, G in act.generators:
        twisted = H_inv.map_hom(hom_gamma(f.target.frame, chi))
        generators.append((chi, H @ G @ twisted))
    return GammaAction(f.target, tuple(generators), None)


def bt_action_iso_check(T: Matrix, source: GammaAction, target: GammaAction) -> bool:
    """T ∘ γ_source = γ_target ∘ T for every shared generator."""
    for chi, _ in source.generators:
        lhs = mat_mul(T, source.values(chi))
        rhs = mat_mul(target.values(chi), gamma_matrix(T, chi))
        if lhs != rhs:
            return False
    return True


def transfer_roundtrip_check(act: GammaAction) -> bool:
    """act_win_to_bt(act_bt_to_win(act)) agrees with act through the round-trip certificate."""
    back = act_win_to_bt(act_bt_to_win(act))
    iso = bt_roundtrip(act.carrier)
    return bt_action_iso_check(iso.T, act, back)


def window_transfer_roundtrip_check(act: GammaAction) -> bool:
    """act_bt_to_win(act_win_to_bt(act)) agrees with act through the window round-trip isomorphism."""
    back = act_bt_to_win(act_win_to_bt(act))
    _, H = window_roundtrip_iso(act.carrier)
    return bt_action_iso_check(H, back, act)


def in_ideal(x: TruncatedSeries, generators: Sequence[TruncatedSeries]) -> bool:
    """Whether x = Σ g_i y_i is solvable at working precision."""
    cls, ctx = type(x), x.ctx

    def residual(ys):
        total = x * 0
        for g, y in zip(generators, ys):
            total = total + g * y
        return [total - x]

    particular, _ = solve_linear_system(residual, [(cls, ctx)] * len(generators))
    return particular is not None


def gammafs_check(x: SigmaSeries, chi: int, s: int) -> bool:
    """(γ - 1)(x) is divisible by φ^s(u) when χ ≡ 1 mod p^s."""
    ctx = x.ctx
    if (chi - 1) % ctx.p**s:
        raise ValueError(f"chi={chi} is not 1 mod p^{s}")
    u_image = variable(ctx)
    for _ in range(s):
        u_image = u_image.frobenius()
    return in_ideal(x.gamma(chi) - x, [u_image])


def scont_check(x: ScriptSeries, chi: int) -> bool:
    """(γ - 1)(x) ∈ tS when χ ≡ 1 mod p^r."""
    ctx = x.ctx
    if (chi - 1) % ctx.p**ctx.r:
        raise ValueError(f"chi={chi} is not 1 mod p^{ctx.r}")
    return in_ideal(x.gamma(chi) - x, [element_t(ctx)])


def divided_power_scont_check(ctx: PrecisionCtx, chi: int) -> CheckReport:
    """scont_check on E^[n] for n <= n_max and on the products E^[a] E^[b] of Fil generators."""
    report = CheckReport(f"scont-divided-powers[chi={chi}]")
    degrees = range(1, n_max(ctx.p, ctx.N, ctx.M) + 1)
    powers = {n: divided_power_E(ctx, n) for n in degrees}
    for n, x in powers.items():
        report.expect(scont_check(x, chi), f"(gamma-1)E^[{n}] not in tS, chi={chi}")
    for a, b in itertools.combinations_with_replacement(fil_generator_degrees(ctx), 2):
        report.expect(scont_check(powers[a] * powers[b], chi), f"(gamma-1)(E^[{a}] E^[{b}]) not in tS, chi={chi}")
    return report


def _script_window(act: GammaAction) -> Window:
    W = act.carrier
    if not act.on_window or W.frame.kind is not FrameKind.SCRIPT:
        raise BadHom("this operation needs an action on an S-window")
    return W


def _gamma_minus_one(G: Matrix, chi: int, v: Sequence[TruncatedSeries]) -> tuple[TruncatedSeries, ...]:
    image = mat_vec(G, gamma_vector(v, chi))
    return tuple(a - b for a, b in zip(image, v))


def _basis_vector(W: Window, j: int) -> tuple[TruncatedSeries, ...]:
    return tuple(W.frame.one() if i == j else W.frame.zero() for i in range(W.n))


def _bound_generators(t: ScriptSeries, p_power: int, n: int) -> list[ScriptSeries]:
    """Generators t^(i+1) p_power^(n-i) of (t, p_power)^n t."""
    return [t ** (i + 1) * p_power ** (n - i) for i in range(n + 1)]


def gamma_bound_check(act: GammaAction, chi: int, n: int) -> bool:
    """(γ - 1)^(n+1)(M) ⊆ (t, p^r)^n tM for χ ≡ 1 mod p^r."""
    W = _script_window(act)
    ctx = act.ctx
    if (chi - 1) % ctx.p**ctx.r:
        raise ValueError(f"chi={chi} is not 1 mod p^{ctx.r}")
    G = act.values(chi)
    generators = _bound_generators(element_t(ctx), ctx.p**ctx.r, n)
    for j in range(W.n):
        v = _basis_vector(W, j)
        for _ in range(n + 1):
            v = _gamma_minus_one(G, chi, v)
        if not all(in_ideal(x, generators) for x in v):
            return False
    return True


def gamma_close_check(act: GammaAction, chi: int, m: int) -> bool:
    """(γ - 1)(M) ⊆ (t, p)^m tM for χ ≡ 1 mod p^(r+m)."""
    W = _script_window(act)
    ctx = act.ctx
    if (chi - 1) % ctx.p ** (ctx.r + m):
        raise ValueError(f"chi={chi} is not 1 mod p^{ctx.r + m}")
    G = act.values(chi)
    generators = _bound_generators(element_t(ctx), ctx.p, m)
    for j in range(W.n):
        if not all(in_ideal(x, generators) for x in _gamma_minus_one(G, chi, _basis_vector(W, j))):
            return False
    return True


def n_s(x: TruncatedSeries) -> ScriptSeries:
    """The derivation N_S = (1 + u) t d/du on S."""
    x = ScriptSeries.embed(x)
    ctx = x.ctx
    return (ScriptSeries.one(ctx) + ScriptSeries.monomial(ctx, 1)) * element_t(ctx) * x.derivative()


@dataclass(frozen=True)
class MonodromyOperator:
    """N_M on an S-window, stored as its values on the basis; N_M(Σ a_j e_j) = Σ N_S(a_j) e_j + a_j N_M(e_j)."""

    action: GammaAction
    chi: int
    matrix: Matrix
    terms: int
    guard: int

    def apply(self, v: Sequence[TruncatedSeries]) -> tuple[TruncatedSeries, ...]:
        linear = mat_vec(self.matrix, [ScriptSeries.embed(x) for x in v])
        return tuple(n_s(x) + y for x, y in zip(v, linear))


def _guard_digits(ctx: PrecisionCtx) -> int:
    """Digits to carry so that every k with a nonzero log term has v_p(k) within the guard."""
    guard = 0
    while ctx.p ** (guard + 1) <= (ctx.p - 1) * (ctx.N + guard) + 2:
        guard += 1
    return guard


def _log_unit_inverse(chi: int, ctx: PrecisionCtx) -> int:
    """p^r / log χ as a unit mod p^N, for v_p(χ - 1) = r."""
    log = padic_log(chi, ctx.p, ctx.N + ctx.r)
    return pow(log // ctx.p**ctx.r, -1, ctx.modulus)


def _log_series(act: GammaAction, chi: int, vectors, ctx: PrecisionCtx, guard: int):
    """Σ_k (-1)^(k+1) (γ - 1)^k(v) / k at guard precision, reduced to ``ctx``."""
    G = act.values(chi)
    budget = (ctx.p - 1) * (ctx.N + guard) + 2
    totals = [[ScriptSeries.zero(ctx) for _ in v] for v in vectors]
    current = [tuple(vector) for vector in vectors]
    k = 0
    while True:
        k += 1
        current = [_gamma_minus_one(G, chi, v) for v in current]
        if all(x.is_zero() for v in current for x in v):
            break
        if k > budget:
            raise BudgetExceeded(f"log(gamma) did not terminate within {budget} terms")
        if valuation(k, ctx.p) > guard:
            raise PrecisionUnavailable(f"term {k} needs more than {guard} guard digits")
        sign = 1 if k % 2 else -1
        for total, v in zip(totals, current):
            for index, x in enumerate(v):
                total[index] = total[index] + x.exact_div_int(k, ctx) * sign
    logger.debug("log series for chi=%s terminated after %d terms", chi, k)
    return totals, k


def _small_generator(act: GammaAction, chi: int | None) -> int:
    ctx = act.ctx
    if chi is not None:
        if valuation(chi - 1, ctx.p) != ctx.r:
            raise NoSmallGenerator(f"chi={chi} is not 1 + p^{ctx.r} * unit")
        return chi
    for listed in act.chis:
        if listed != 1 and valuation(listed - 1, ctx.p) == ctx.r:
            return listed
    raise NoSmallGenerator(f"no generator with chi = 1 + p^{ctx.r} * unit")


def nm_series(act: GammaAction, vectors, chi: int | None = None):
    """Apply p^r log(γ)/log χ directly to arbitrary vectors of the carrier."""
    _script_window(act)
    ctx = act.ctx
    chi = _small_generator(act, chi)
    guard = _guard_digits(ctx)
    wide = act.rebuilt(ctx.widened(guard), (chi,)) if guard else act
    lifted = [[ScriptSeries.embed(x).lift_to(wide.ctx) for x in v] for v in vectors]
    totals, _ = _log_series(wide, chi, lifted, ctx, guard)
    factor = _log_unit_inverse(chi, ctx)
    return [tuple(x * factor for x in total) for total in totals]


def n_operator(act: GammaAction, chi: int | None = None) -> MonodromyOperator:
    """N_M = p^r log(γ)/log χ(γ) for a strict action of Γ_r on an S-window."""
    W = _script_window(act)
    ctx = act.ctx
    chi = _small_generator(act, chi)
    G0 = [[x.constant_term for x in row] for row in act.values(chi)]
    if G0 != [[1 if i == j else 0 for j in range(W.n)] for i in range(W.n)]:
        raise NotStrict(f"gamma_chi for chi={chi} is not the identity mod u")
    guard = _guard_digits(ctx)
    wide = act.rebuilt(ctx.widened(guard), (chi,)) if guard else act
    basis = [[x.lift_to(wide.ctx) for x in _basis_vector(W, j)] for j in range(W.n)]
    totals, terms = _log_series(wide, chi, basis, ctx, guard)
    factor = _log_unit_inverse(chi, ctx)
    columns = [[x * factor for x in total] for total in totals]
    return MonodromyOperator(act, chi, transpose(matrix(columns)), terms, guard)


def nm_apply(op: MonodromyOperator, v: Sequence[TruncatedSeries]) -> tuple[TruncatedSeries, ...]:
    return op.apply(v)


def nm_check(op: MonodromyOperator, rng: random.Random | None = None, other_chi: int | None = None) -> CheckReport:
    """Image in tM, N_M Φ = Φ N_M, N_M γ = γ N_M, Leibniz over N_S, and independence of χ."""
    rng = rng or random.Random(0)
    act = op.action
    W = act.carrier
    ctx = act.ctx
    t = element_t(ctx)
    report = CheckReport(f"n_operator[chi={op.chi}]")
    report.expect(all(in_ideal(x, [t]) for row in op.matrix for x in row), "N_M(M) is not inside tM")
    F, _ = fv_pair(W)
    for j in range(W.n):
        lhs = op.apply(column(F, j))
        rhs = mat_vec(F, [x.frobenius() for x in column(op.matrix, j)])
        report.expect(lhs == rhs, f"N_M Phi != Phi N_M on basis vector {j}")
    for chi, _ in act.generators:
        G = act.values(chi)
        for j in range(W.n):
            lhs = op.apply(column(G, j))
            rhs = mat_vec(G, gamma_vector(column(op.matrix, j), chi))
            report.expect(lhs == rhs, f"N_M gamma != gamma N_M for chi={chi} on basis vector {j}")
    a = ScriptSeries.random(ctx, rng, 4)
    j = rng.randrange(W.n)
    v = tuple(a if i == j else ScriptSeries.zero(ctx) for i in range(W.n))
    report.expect(nm_series(act, [v], op.chi)[0] == op.apply(v), "N_M fails the Leibniz rule over N_S")
    if other_chi is None:
        other_chi = op.chi**2
    other = n_operator(act, other_chi)
    report.expect(other.matrix == op.matrix, f"N_M depends on the generator ({op.chi} vs {other_chi})")
    return report


@dataclass(frozen=True)
class ConnectionSolution:
    C: Matrix
    D: Matrix
    iterations: int


def connection_operator(W: Window, C: Matrix) -> Matrix:
    """𝒰(C) = F φ(C) u^(p-1) V."""
    ctx = W.frame.ctx
    F, V = fv_pair(W)
    shift = ScriptSeries.monomial(ctx, ctx.p - 1)
    return mat_mul(mat_mul(F, mat_map(lambda x: x.frobenius() * shift, C)), V)


def solve_connection(W: Window) -> ConnectionSolution:
    """The matrix C of ∇(e) = e·C du with ∇Φ = (Φ ⊗ dφ)∇, from C - 𝒰(C) = D and D = -Ψ'Ψ^{-1}."""
    ctx = W.frame.ctx
    if W.frame.kind is not FrameKind.SCRIPT:
        raise BadHom("the connection is solved over an S-window")
    if ctx.lift is not Lift.STANDARD:
        raise NotNilpotent("(dφ)_1 is nilpotent mod the maximal ideal only for the standard lift")
    D = mat_scale(mat_mul(mat_map(lambda x: x.derivative(), W.psi), mat_inverse(W.psi)), -1)
    C, iterations = solve_neumann(W, D)
    return ConnectionSolution(C, D, iterations)


def solve_neumann(W: Window, D: Matrix) -> tuple[Matrix, int]:
    """Iterate C ← 𝒰(C) + D from C = D until the increment vanishes."""
    ctx = W.frame.ctx
    C, increment = D, D
    budget = -(-ctx.M // (ctx.p - 1)) + ctx.N + 1
    iterations = 0
    while any(not x.is_zero() for row in increment for x in row):
        increment = connection_operator(W, increment)
        C = mat_add(C, increment)
        iterations += 1
        if iterations > budget:
            raise BudgetExceeded("Neumann iteration did not converge")
    logger.debug("connection solver converged after %d iterations", iterations)
    return C, iterations


def connection_residual(W: Window, solution: ConnectionSolution) -> Matrix:
    return mat_sub(mat_sub(solution.C, connection_operator(W, solution.C)), solution.D)


def is_horizontal(W: Window, C: Matrix) -> bool:
    """F' + C F = p u^(p-1) F φ(C), compared below u^(M-1) where derivatives are determined."""
    ctx = W.frame.ctx
    F, _ = fv_pair(W)
    lhs = mat_add(mat_map(lambda x: x.derivative(), F), mat_mul(C, F))
    shift = ScriptSeries.monomial(ctx, ctx.p - 1) * ctx.p
    rhs = mat_mul(F, mat_map(lambda x: x.frobenius() * shift, C))
    cut = ctx.M - 1
    return mat_map(lambda x: x.truncate(cut), lhs) == mat_map(lambda x: x.truncate(cut), rhs)


def identity_action(W: Window, chis: Sequence[int]) -> GammaAction:
    """The action with γ_χ(e_j) = e_j for every generator."""
    ident = FilteredMatrix.identity(W.frame, W.types)
    return GammaAction(W, tuple((chi, ident) for chi in chis))

