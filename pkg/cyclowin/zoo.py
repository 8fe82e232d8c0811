"""Canonical objects with Γ-actions: Q_p/Z_p, Ĝ_m, unramified twists, sums and extensions.

Every object is defined by a builder ``(ctx, chis) -> (window over 𝔖, action)``.  The BT module
and the S-window avatars are derived through win_to_bt and base change along λ, so the three
views always agree, and the builder lets any view be rebuilt at a wider precision.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .bt_modules import BTModule
from .exceptions import NoEquivariantExtension
from .frames import LambdaHom, hom_gamma, sigma_frame
from .gamma_calculus import (
    GammaAction,
    act_base_change,
    act_win_to_bt,
    default_chis,
    gamma_matrix,
    lambda_gamma,
    transport_action,
)
from .linalg import Matrix, mat_mul, mat_sub
from .padic_rings import PrecisionCtx, SigmaSeries, element_y
from .windows import (
    FilteredMatrix,
    Window,
    WindowHom,
    c_diagonal,
    dual_unit_window,
    solve_filtered,
    twist,
    unit_window,
)

logger = logging.getLogger(__name__)

Builder = Callable[[PrecisionCtx, tuple[int, ...]], tuple[Window, GammaAction]]


@dataclass(frozen=True)
class ZooObject:
    name: str
    ctx: PrecisionCtx
    window: Window
    action: GammaAction
    bt: BTModule
    bt_action: GammaAction
    script: Window
    script_action: GammaAction
    builder: Builder = field(compare=False, repr=False)

    @property
    def chis(self) -> tuple[int, ...]:
        return self.action.chis

    def rebuild(self, ctx: PrecisionCtx, chis: Sequence[int] | None = None) -> "ZooObject":
        return realize(self.name, self.builder, ctx, default_chis(ctx) if chis is None else tuple(chis))


def realize(name: str, builder: Builder, ctx: PrecisionCtx, chis: tuple[int, ...] | None = None) -> ZooObject:
    chis = default_chis(ctx) if chis is None else chis
    W, seed = builder(ctx, chis)
    action = _with_recipe(builder, W, seed.generators)
    script_action = act_base_change(action, LambdaHom(W.frame))
    bt_action = act_win_to_bt(action)
    logger.debug("built zoo object %s at %s", name, ctx)
    return ZooObject(
        name=name,
        ctx=ctx,
        window=W,
        action=action,
        bt=bt_action.carrier,
        bt_action=bt_action,
        script=script_action.carrier,
        script_action=script_action,
        builder=builder,
    )


def _with_recipe(builder: Builder, W: Window, generators) -> GammaAction:
    def recipe(ctx, chis):
        carrier, act = builder(ctx, chis)
        return GammaAction(carrier, act.generators, recipe)

    return GammaAction(W, generators, recipe)


def _tate_builder(ctx: PrecisionCtx, chis: tuple[int, ...]):
    W = unit_window(sigma_frame(ctx))
    ident = FilteredMatrix.identity(W.frame, W.types)
    return W, GammaAction(W, tuple((chi, ident) for chi in chis))


def _gm_builder(ctx: PrecisionCtx, chis: tuple[int, ...]):
    W = dual_unit_window(sigma_frame(ctx))
    generators = tuple(
        (chi, FilteredMatrix.from_values(W.frame, W.types, W.types, ((lambda_gamma(ctx, chi).value.frobenius(),),)))
        for chi in chis
    )
    return W, GammaAction(W, generators)


def std_tate(ctx: PrecisionCtx, chis: Sequence[int] | None = None) -> ZooObject:
    """Q_p/Z_p: the unit window, BT module (𝔖, φ), with the standard action of Γ_0."""
    return realize("tate", _tate_builder, ctx, None if chis is None else tuple(chis))


def std_gm(ctx: PrecisionCtx, chis: Sequence[int] | None = None) -> ZooObject:
    """Ĝ_m: 𝔖^t, BT module (𝔖, Eφ) with γ acting as x ↦ λ_γ γ(x)."""
    return realize("gm", _gm_builder, ctx, None if chis is None else tuple(chis))


def gm_y_isomorphism(obj: ZooObject) -> WindowHom:
    """Multiplication by y = u0/t from the S-avatar of Ĝ_m onto the S-dual unit window."""
    source = obj.script
    target = dual_unit_window(source.frame)
    y = element_y(obj.ctx)
    return WindowHom(source, target, FilteredMatrix.scalar(source.frame, source.types, y))


def gm_dual_unit_action(obj: ZooObject) -> GammaAction:
    """The Ĝ_m action carried to S^t along multiplication by y."""
    return transport_action(obj.script_action, gm_y_isomorphism(obj))


def unramified_twist(obj: ZooObject, a: int) -> ZooObject:
    """Ψ ↦ aΨ for a unit a of Z_p; on the BT side A ↦ aA and B ↦ a^{-1}B."""
    inner = obj.builder

    def builder(ctx, chis):
        W, act = inner(ctx, chis)
        twisted = twist(W, W.frame.element(a))
        return twisted, GammaAction(twisted, act.generators)

    return realize(f"{obj.name}_twist", builder, obj.ctx, obj.chis)


def _block_filtered(frame, top_left: FilteredMatrix, top_right, bottom_right: FilteredMatrix) -> FilteredMatrix:
    """[[top_left, top_right], [0, bottom_right]]; ``top_right`` may be None for zero."""
    k = len(top_left.rows)
    rows = top_left.rows + bottom_right.rows
    cols = top_left.cols + bottom_right.cols

    def entry(i, j):
        if i < k and j < k:
            return top_left.entries[i][j]
        if i >= k and j >= k:
            return bottom_right.entries[i - k][j - k]
        if i < k:
            if top_right is not None:
                return top_right.entries[i][j - k]
            return frame.fil() if (not rows[i] and cols[j]) else frame.zero()
        return frame.fil() if (not rows[i] and cols[j]) else frame.zero()

    return FilteredMatrix.build(frame, rows, cols, entry)


def _block_psi(frame, A: Matrix, corner: Matrix | None, B: Matrix) -> Matrix:
    k, n = len(A), len(A) + len(B)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < k and j < k:
                row.append(A[i][j])
            elif i >= k and j >= k:
                row.append(B[i - k][j - k])
            elif i < k and corner is not None:
                row.append(corner[i][j - k])
            else:
                row.append(frame.zero())
        rows.append(tuple(row))
    return tuple(rows)


def direct_sum(first: ZooObject, second: ZooObject) -> ZooObject:
    left, right = first.builder, second.builder

    def builder(ctx, chis):
        W1, a1 = left(ctx, chis)
        W2, a2 = right(ctx, chis)
        frame = W1.frame
        W = Window(frame, W1.types + W2.types, _block_psi(frame, W1.psi, None, W2.psi))
        generators = tuple(
            (chi, _block_filtered(frame, G1, None, G2)) for (chi, G1), (_, G2) in zip(a1.generators, a2.generators)
        )
        return W, GammaAction(W, generators)

    return realize(f"{first.name}+{second.name}", builder, first.ctx, first.chis)


def extension(sub: ZooObject, quotient: ZooObject, g: Sequence[int]) -> ZooObject:
    """The window [[Ψ_sub, g], [0, Ψ_quot]] with the Γ-action solved block by block.

    ``g`` lists the integer u-coefficients of the class parameter placed in the top-right corner.
    Raises NoEquivariantExtension when some generator admits no compatible corner.
    """
    top, bottom = sub.builder, quotient.builder
    coefficients = tuple(g)

    def builder(ctx, chis):
        W1, a1 = top(ctx, chis)
        W2, a2 = bottom(ctx, chis)
        frame = W1.frame
        corner = [[frame.zero() for _ in range(W2.n)] for _ in range(W1.n)]
        corner[0][0] = SigmaSeries.from_coefficients(ctx, list(coefficients))
        psi = _block_psi(frame, W1.psi, corner, W2.psi)
        W = Window(frame, W1.types + W2.types, psi)
        generators = []
        for (chi, G1), (_, G2) in zip(a1.generators, a2.generators):
            h = hom_gamma(frame, chi)
            gamma_psi = mat_mul(gamma_matrix(psi, chi), c_diagonal(frame, W.types, h.c))

            def residual(H, G1=G1, G2=G2, gamma_psi=gamma_psi):
                G = _block_filtered(frame, G1, H, G2)
                return mat_sub(mat_mul(psi, G.hat()), mat_mul(G.values(), gamma_psi))

            particular, _ = solve_filtered(frame, W1.types, W2.types, residual)
            if particular is None:
                raise NoEquivariantExtension(f"no Γ-compatible corner for chi={chi}")
            generators.append((chi, _block_filtered(frame, G1, particular, G2)))
        return W, GammaAction(W, tuple(generators))

    return realize(f"ext_{sub.name}_{quotient.name}", builder, sub.ctx, sub.chis)


_CATALOGUE: dict[str, Callable[[PrecisionCtx], ZooObject]] = {
    "tate": lambda ctx: std_tate(ctx),
    "gm": lambda ctx: std_gm(ctx),
    "tate_twist": lambda ctx: unramified_twist(std_tate(ctx), 2),
    "gm_twist": lambda ctx: unramified_twist(std_gm(ctx), 2),
    "tate+gm": lambda ctx: direct_sum(std_tate(ctx), std_gm(ctx)),
    "ext_gm_tate": lambda ctx: extension(std_gm(ctx), std_tate(ctx), (0, 1)),
}


def zoo_names() -> tuple[str, ...]:
    return tuple(_CATALOGUE)


def build(name: str, ctx: PrecisionCtx) -> ZooObject:
    try:
        factory = _CATALOGUE[name]
    except KeyError:
        raise ValueError(f"unknown zoo object {name!r}; choose from {', '.join(_CATALOGUE)}") from None
    return factory(ctx)

