"""Frames (S, Fil S, R, φ, φ_1, ϖ) and c-homomorphisms between them.

Three ring tags are supported: the Breuil-Kisin frame over 𝔖 (either Frobenius lift), the
divided power frame over S, and the constant frame over Z_p.  Fil S is described by a finite
list of generators with known φ_1-images, and elements of Fil travel as :class:`FilElement`
cofactor vectors on those generators, so φ_1 is always evaluated exactly.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .checks import CheckReport
from .exceptions import BadHom, BadLevels
from .padic_rings import (
    Lift,
    PrecisionCtx,
    ScriptSeries,
    SigmaSeries,
    TruncatedSeries,
    cyclo_E,
    divided_power_E,
    element_c,
    fil_generator_degrees,
    gamma_ratio_E,
    normalize_chi,
    phi1_divided_power,
)

logger = logging.getLogger(__name__)


class FrameKind(str, Enum):
    SIGMA = "sigma"
    SCRIPT = "script"
    ZP = "zp"


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    ctx: PrecisionCtx
    var_level: int
    varpi: TruncatedSeries
    generators: tuple[TruncatedSeries, ...]
    labels: tuple[str | int, ...]
    phi1_generators: tuple[TruncatedSeries, ...]

    @property
    def ring(self) -> type[TruncatedSeries]:
        return ScriptSeries if self.kind is FrameKind.SCRIPT else SigmaSeries

    def zero(self) -> TruncatedSeries:
        return self.ring.zero(self.ctx)

    def one(self) -> TruncatedSeries:
        return self.ring.one(self.ctx)

    def element(self, x) -> TruncatedSeries:
        """Coerce an integer or an 𝔖-element into the frame ring."""
        if isinstance(x, int):
            return self.ring.constant(self.ctx, x)
        if self.kind is FrameKind.SCRIPT:
            return ScriptSeries.embed(x)
        return x

    def random_element(self, rng: random.Random, degree: int | None = None) -> TruncatedSeries:
        return self.ring.random(self.ctx, rng, degree)

    def phi(self, x: TruncatedSeries) -> TruncatedSeries:
        return x.frobenius()

    def fil(self, *cofactors) -> "FilElement":
        padded = list(cofactors) + [0] * (len(self.generators) - len(cofactors))
        return FilElement(self, tuple(self.element(k) for k in padded))

    def fil_from_generator(self, index: int, cofactor=1) -> "FilElement":
        cofactors = [0] * len(self.generators)
        cofactors[index] = cofactor
        return self.fil(*cofactors)

    def random_fil(self, rng: random.Random, degree: int | None = None) -> "FilElement":
        return FilElement(self, tuple(self.random_element(rng, degree) for _ in self.generators))

    def descriptor(self) -> dict:
        return {"ring": self.kind.value, "r": self.ctx.r, "lift": self.ctx.lift.value, "var_level": self.var_level}


@dataclass(frozen=True)
class FilElement:
    """Element Σ g_i K_i of Fil S, kept as its cofactors K_i on the frame generators g_i."""

    frame: Frame
    cofactors: tuple[TruncatedSeries, ...]

    def value(self) -> TruncatedSeries:
        total = self.frame.zero()
        for g, k in zip(self.frame.generators, self.cofactors):
            total = total + g * k
        return total

    def phi1(self) -> TruncatedSeries:
        total = self.frame.zero()
        for image, k in zip(self.frame.phi1_generators, self.cofactors):
            total = total + image * k.frobenius()
        return total

    def is_zero(self) -> bool:
        return all(k.is_zero() for k in self.cofactors)

    def __add__(self, other: "FilElement") -> "FilElement":
        return FilElement(self.frame, tuple(a + b for a, b in zip(self.cofactors, other.cofactors)))

    def __sub__(self, other: "FilElement") -> "FilElement":
        return FilElement(self.frame, tuple(a - b for a, b in zip(self.cofactors, other.cofactors)))

    def __neg__(self) -> "FilElement":
        return FilElement(self.frame, tuple(-a for a in self.cofactors))

    def __mul__(self, s) -> "FilElement":
        s = self.frame.element(s) if isinstance(s, int) else s
        return FilElement(self.frame, tuple(self.frame.element(a * s) for a in self.cofactors))

    __rmul__ = __mul__

    def map_cofactors(self, f) -> "FilElement":
        return FilElement(self.frame, tuple(f(a) for a in self.cofactors))


@lru_cache(maxsize=None)
def sigma_frame(ctx: PrecisionCtx, var_level: int | None = None) -> Frame:
    E = cyclo_E(ctx, ctx.r)
    return Frame(
        kind=FrameKind.SIGMA,
        ctx=ctx,
        var_level=ctx.r if var_level is None else var_level,
        varpi=E.frobenius(),
        generators=(E,),
        labels=("E",),
        phi1_generators=(SigmaSeries.one(ctx),),
    )


@lru_cache(maxsize=None)
def script_frame(ctx: PrecisionCtx) -> Frame:
    degrees = fil_generator_degrees(ctx)
    return Frame(
        kind=FrameKind.SCRIPT,
        ctx=ctx,
        var_level=ctx.r,
        varpi=ScriptSeries.constant(ctx, ctx.p),
        generators=tuple(divided_power_E(ctx, n) for n in degrees),
        labels=degrees,
        phi1_generators=tuple(phi1_divided_power(ctx, n) for n in degrees),
    )


@lru_cache(maxsize=None)
def zp_frame(ctx: PrecisionCtx) -> Frame:
    ctx = ctx.constants()
    return Frame(
        kind=FrameKind.ZP,
        ctx=ctx,
        var_level=0,
        varpi=SigmaSeries.constant(ctx, ctx.p),
        generators=(SigmaSeries.constant(ctx, ctx.p),),
        labels=("p",),
        phi1_generators=(SigmaSeries.one(ctx),),
    )


def frame_check(frame: Frame, rng: random.Random | None = None, samples: int = 4, strict: bool = True) -> CheckReport:
    """Spot-check the frame axioms at working precision."""
    rng = rng or random.Random(0)
    report = CheckReport(f"frame[{frame.kind.value}]")
    ctx = frame.ctx
    monomials = [frame.ring.monomial(ctx, k) for k in range(ctx.M)]
    samples_ = monomials + [frame.random_element(rng) for _ in range(samples)]
    for index, x in enumerate(samples_):
        difference = frame.phi(x) - x**ctx.p
        report.expect(difference.lattice_valuation() >= 1, f"phi is not the p-power map mod p on sample {index}")
    for label, g, image in zip(frame.labels, frame.generators, frame.phi1_generators):
        report.expect(frame.phi(g) == frame.varpi * image, f"phi != varpi*phi1 on generator {label}")
        report.expect(not g.is_unit(), f"Fil generator {label} is a unit")
    for _ in range(samples):
        f = frame.random_fil(rng)
        report.expect(frame.phi(f.value()) == frame.varpi * f.phi1(), "phi != varpi*phi1 on a random Fil element")
    if strict:
        report.raise_for_failures()
    return report


class FrameHom:
    """A c-homomorphism α of frames: α(ϖ) = c ϖ' and φ'_1 α = c α φ_1 on Fil."""

    kind = "abstract"

    def __init__(self, source: Frame, target: Frame, c: TruncatedSeries, chi: int | None = None):
        self.source = source
        self.target = target
        self.c = target.element(c)
        self.chi = chi

    def apply(self, x: TruncatedSeries) -> TruncatedSeries:
        raise NotImplementedError

    def generator_image(self, index: int) -> FilElement:
        raise NotImplementedError

    def apply_fil(self, f: FilElement) -> FilElement:
        total = FilElement(self.target, tuple(self.target.zero() for _ in self.target.generators))
        for index, k in enumerate(f.cofactors):
            if not k.is_zero():
                total = total + self.generator_image(index) * self.apply(k)
        return total

    @property
    def is_strict(self) -> bool:
        return self.c == 1

    def compose(self, first: "FrameHom") -> "FrameHom":
        """The composite self ∘ first."""
        return ComposedHom(first, self)

    def descriptor(self) -> dict:
        out = {"kind": self.kind, "source": self.source.descriptor(), "target": self.target.descriptor()}
        if self.chi is not None:
            out["chi"] = str(self.chi)
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self.source.kind.value} -> {self.target.kind.value})"


class IdentityHom(FrameHom):
    kind = "identity"

    def __init__(self, frame: Frame):
        super().__init__(frame, frame, 1)

    def apply(self, x):
        return x

    def generator_image(self, index):
        return self.target.fil_from_generator(index)


class LambdaHom(FrameHom):
    kind = "lambda"

    def __init__(self, source: Frame):
        if source.kind is not FrameKind.SIGMA:
            raise BadHom("lambda starts at a Breuil-Kisin frame")
        super().__init__(source, script_frame(source.ctx), element_c(source.ctx))

    def apply(self, x):
        return ScriptSeries.embed(x)

    def generator_image(self, index):
        return self.target.fil_from_generator(0)


class GammaHom(FrameHom):
    kind = "gamma"

    def __init__(self, frame: Frame, chi: int):
        chi = normalize_chi(frame.ctx, chi)
        if frame.kind is FrameKind.SIGMA:
            if frame.ctx.lift is not Lift.CYCLOTOMIC:
                raise BadHom("the Γ-action is a frame automorphism only for the cyclotomic lift")
            self.ratio = gamma_ratio_E(frame.ctx, chi)
            c = self.ratio.frobenius()
        elif frame.kind is FrameKind.SCRIPT:
            self.ratio = ScriptSeries.embed(gamma_ratio_E(frame.ctx, chi))
            c = 1
        else:
            self.ratio = frame.one()
            c = 1
        super().__init__(frame, frame, c, chi)

    def apply(self, x):
        return x.gamma(self.chi)

    def generator_image(self, index):
        degree = self.source.labels[index]
        power = degree if isinstance(degree, int) else 1
        return self.target.fil_from_generator(index, self.ratio**power)


class LevelHom(FrameHom):
    """𝔖_r → 𝔖_(r+1), u_r ↦ (1 + u_(r+1))^p - 1; E is sent to E."""

    kind = "level"

    def __init__(self, source: Frame):
        if source.kind is not FrameKind.SIGMA or source.var_level != source.ctx.r:
            raise BadLevels("the level inclusion starts at a Breuil-Kisin frame in its own variable")
        if source.ctx.lift is not Lift.CYCLOTOMIC:
            raise BadHom("the level inclusion needs the cyclotomic lift")
        super().__init__(source, sigma_frame(source.ctx.at_level(source.ctx.r + 1)), 1)

    def apply(self, x):
        return x.reinterpret(self.target.ctx).frobenius(Lift.CYCLOTOMIC)

    def generator_image(self, index):
        return self.target.fil_from_generator(0)


class RelabelHom(FrameHom):
    """λ_(r,s): 𝔖_r → 𝔖_s, u_r ↦ u_s, carrying E = E_r(u_r) to E_r(u_s)."""

    kind = "lambda_rs"

    def __init__(self, source: Frame, s: int):
        if source.kind is not FrameKind.SIGMA:
            raise BadHom("lambda_rs acts between Breuil-Kisin frames")
        if not 0 <= s <= source.var_level:
            raise BadLevels(f"need 0 <= s <= {source.var_level}, got s={s}")
        super().__init__(source, sigma_frame(source.ctx, s), 1)

    def apply(self, x):
        return x

    def generator_image(self, index):
        return self.target.fil_from_generator(0)


class QuotientHom(FrameHom):
    """Reduction modulo u onto the constant frame over Z_p."""

    kind = "quotient"

    def __init__(self, source: Frame):
        if source.kind is not FrameKind.SIGMA:
            raise BadHom("the mod-u quotient starts at a Breuil-Kisin frame")
        super().__init__(source, zp_frame(source.ctx), 1)

    def apply(self, x):
        return SigmaSeries(self.target.ctx, (x.coords[0],))

    def generator_image(self, index):
        # E(0) = p
        return self.target.fil_from_generator(0)


class ComposedHom(FrameHom):
    kind = "composite"

    def __init__(self, first: FrameHom, second: FrameHom):
        if first.target != second.source:
            raise BadHom("composable homomorphisms must share the middle frame")
        self.first, self.second = first, second
        super().__init__(first.source, second.target, second.c * second.apply(first.c))

    def apply(self, x):
        return self.second.apply(self.first.apply(x))

    def generator_image(self, index):
        return self.second.apply_fil(self.first.generator_image(index))


def hom_identity(frame: Frame) -> FrameHom:
    return IdentityHom(frame)


def hom_lambda(ctx: PrecisionCtx) -> FrameHom:
    return LambdaHom(sigma_frame(ctx))


def hom_gamma(frame: Frame, chi: int) -> FrameHom:
    return GammaHom(frame, chi)


def hom_level(frame: Frame) -> FrameHom:
    return LevelHom(frame)


def hom_lambda_rs(frame: Frame, s: int) -> FrameHom:
    return RelabelHom(frame, s)


def hom_quotient(frame: Frame) -> FrameHom:
    return QuotientHom(frame)


def hom_check(h: FrameHom, rng: random.Random | None = None, samples: int = 3, strict: bool = True) -> CheckReport:
    """Verify the c-homomorphism identities on generators and random elements."""
    rng = rng or random.Random(0)
    report = CheckReport(f"hom[{h.kind}]")
    source, target = h.source, h.target
    report.expect(h.c.is_unit(), "c is not a unit")
    report.expect(h.apply(source.varpi) == h.c * target.varpi, "alpha(varpi) != c * varpi'")
    for index, (label, g) in enumerate(zip(source.labels, source.generators)):
        image = h.generator_image(index)
        report.expect(image.value() == h.apply(g), f"Fil witness of alpha({label}) has the wrong value")
        report.expect(image.phi1() == h.c * h.apply(source.phi1_generators[index]), f"phi1 law fails on {label}")
    for _ in range(samples):
        x, y = source.random_element(rng), source.random_element(rng)
        report.expect(h.apply(x * y) == h.apply(x) * h.apply(y), "alpha is not multiplicative")
        report.expect(h.apply(source.phi(x)) == target.phi(h.apply(x)), "alpha does not commute with phi")
        f = source.random_fil(rng)
        image = h.apply_fil(f)
        report.expect(image.value() == h.apply(f.value()), "apply_fil changes the value")
        report.expect(image.phi1() == h.c * h.apply(f.phi1()), "phi1 law fails on a random Fil element")
    if strict:
        report.raise_for_failures()
    return report
