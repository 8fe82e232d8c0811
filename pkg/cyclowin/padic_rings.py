"""Exact arithmetic in the truncated rings 𝔖 = Z_p[[u]] and S (divided power envelope of E𝔖).

Elements of 𝔖 are kept modulo (p^N, u^M).  Elements of S are kept in the coordinates of the
lattice

    Λ = ⊕_k p^(-d_k) Z_p u^k,   d_k = v_p(⌊k/e⌋!),   e = deg E = p^(r-1)(p-1),

which is the image of S modulo u^M.  The stored coordinate of u^k is Y_k = c_k p^(d_k) mod p^N,
so an element is exact at precision p^N Λ.  Λ is closed under multiplication, Frobenius and the
Γ-action, so every operation below is exact.

Multiplication is Kronecker substitution on big integers (gmpy2); substitution maps such as φ
and γ use cached tables of powers of the image of u.
"""

import logging
import math
import random
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar, Iterable, Sequence

import gmpy2
from gmpy2 import bit_mask, mpz
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime, primitive_root

from .exceptions import NonUnitChi, NotAUnit, NotInFil, NotInS

logger = logging.getLogger(__name__)


def valuation(x: int, p: int) -> int | float:
    """p-adic valuation of an integer; ``math.inf`` for zero."""
    if x == 0:
        return math.inf
    return int(gmpy2.remove(mpz(x), p)[1])


def factorial_valuation(n: int, p: int) -> int:
    total, q = 0, p
    while q <= n:
        total += n // q
        q *= p
    return total


def unit_part(x: int, p: int) -> tuple[int, int]:
    """Split a nonzero integer as (v, w) with x = p^v * w."""
    w, v = gmpy2.remove(mpz(x), p)
    return int(v), int(w)


def fraction_mod(value: Fraction, modulus: int, p: int) -> int:
    """Residue of a p-integral rational number modulo a power of p."""
    if value.denominator % p == 0:
        raise NotInS(f"{value} is not p-integral")
    return value.numerator * pow(value.denominator, -1, modulus) % modulus


class Lift(str, Enum):
    CYCLOTOMIC = "cyclotomic"
    STANDARD = "standard"


def n_max(p: int, N: int, M: int) -> int:
    return -(-(N + M) * (p - 1) // (p - 2))


class PrecisionCtx(BaseModel):
    """Working precision: modulo (p^N, u^M) at cyclotomic level r."""

    model_config = ConfigDict(frozen=True)

    p: int = 3
    N: int = Field(6, ge=1)
    M: int = Field(64, ge=1)
    r: int = Field(1, ge=1)
    lift: Lift = Lift.CYCLOTOMIC
    K: int = Field(0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _default_budget(cls, data):
        if isinstance(data, dict) and data.get("K") is None:
            data = dict(data)
            p, N, M = data.get("p", 3), data.get("N", 6), data.get("M", 64)
            if isinstance(p, int) and p >= 3 and isinstance(N, int) and isinstance(M, int):
                data["K"] = factorial_valuation(n_max(p, N, M), p)
        return data

    @field_validator("p")
    @classmethod
    def _odd_prime(cls, value: int) -> int:
        if value < 3 or not isprime(value):
            raise ValueError(f"p must be an odd prime, got {value}")
        return value

    @model_validator(mode="after")
    def _check_budget(self):
        required = factorial_valuation(n_max(self.p, self.N, self.M), self.p)
        if self.K < required:
            raise ValueError(f"denominator budget K={self.K} below v_p(n_max!)={required}")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "PrecisionCtx":
        from . import default_settings

        merged = {key: default_settings[key] for key in ("p", "N", "M", "r", "lift")}
        merged.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**merged)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def e(self) -> int:
        return self.p ** (self.r - 1) * (self.p - 1)

    @property
    def denominators(self) -> tuple[int, ...]:
        return _script_denominators(self)

    @property
    def scale_cap(self) -> int:
        return self.denominators[-1]

    @property
    def chi_precision(self) -> int:
        return self.N + factorial_valuation(self.M - 1, self.p) + self.scale_cap

    @property
    def chi_modulus(self) -> int:
        return self.p**self.chi_precision

    def _derived(self, **changes) -> "PrecisionCtx":
        fields = {"p": self.p, "N": self.N, "M": self.M, "r": self.r, "lift": self.lift}
        fields.update(changes)
        return PrecisionCtx(**fields)

    def widened(self, extra_N: int) -> "PrecisionCtx":
        return self._derived(N=self.N + extra_N)

    def mod_pn(self, n: int) -> "PrecisionCtx":
        return self._derived(N=n)

    def at_level(self, r: int) -> "PrecisionCtx":
        return self._derived(r=r)

    def with_lift(self, lift: Lift | str) -> "PrecisionCtx":
        return self._derived(lift=Lift(lift))

    def constants(self) -> "PrecisionCtx":
        return self._derived(M=1)

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "M": self.M, "r": self.r, "lift": self.lift.value}


@lru_cache(maxsize=None)
def _script_denominators(ctx: PrecisionCtx) -> tuple[int, ...]:
    return tuple(factorial_valuation(k // ctx.e, ctx.p) for k in range(ctx.M))


def truncated_product(a: Sequence[int], b: Sequence[int], length: int) -> list[int]:
    """Exact product of two nonnegative integer polynomials, truncated to ``length`` terms."""
    a, b = list(a[:length]), list(b[:length])
    if not a or not b:
        return [0] * length
    bound = max(a) * max(b) * min(len(a), len(b))
    width = int(gmpy2.bit_length(mpz(bound))) + 1
    packed = _pack(a, width) * _pack(b, width)
    return _unpack(packed, width, length)


def _pack(coeffs: Sequence[int], width: int) -> mpz:
    acc = mpz(0)
    for c in reversed(coeffs):
        acc = (acc << width) | c
    return acc


def _unpack(value: mpz, width: int, count: int) -> list[int]:
    mask = bit_mask(width)
    out = []
    for _ in range(count):
        out.append(int(value & mask))
        value >>= width
    return out


class _SubstitutionTable:
    """Packed powers of the image of u, reduced modulo ``modulus``."""

    __slots__ = ("width", "rows", "modulus")

    def __init__(self, image: Sequence[int], length: int, modulus: int):
        self.modulus = modulus
        self.width = int(gmpy2.bit_length(mpz(length * modulus * modulus))) + 1
        image = [c % modulus for c in image[:length]] + [0] * max(0, length - len(image))
        row = [1 % modulus] + [0] * (length - 1)
        rows = []
        for _ in range(length):
            rows.append(_pack(row, self.width))
            row = [c % modulus for c in truncated_product(row, image, length)]
        self.rows = tuple(rows)

    def apply(self, numerators: Sequence[int], length: int) -> list[int]:
        acc = mpz(0)
        for x, row in zip(numerators, self.rows):
            if x:
                acc += x * row
        return _unpack(acc, self.width, length)


def _frobenius_image(p: int, lift: Lift, length: int) -> list[int]:
    if lift is Lift.STANDARD:
        return [1 if k == p else 0 for k in range(length)]
    return [math.comb(p, k) if k >= 1 else 0 for k in range(length)]


@lru_cache(maxsize=None)
def _frobenius_table(ctx: PrecisionCtx, kind: str, lift: Lift) -> _SubstitutionTable:
    scale = ctx.scale_cap if kind == "script" else 0
    logger.debug("building %s frobenius table for %s (lift=%s)", kind, ctx, lift.value)
    return _SubstitutionTable(_frobenius_image(ctx.p, lift, ctx.M), ctx.M, ctx.p ** (ctx.N + scale))


@lru_cache(maxsize=256)
def _gamma_table(ctx: PrecisionCtx, kind: str, chi: int) -> _SubstitutionTable:
    scale = ctx.scale_cap if kind == "script" else 0
    modulus = ctx.p ** (ctx.N + scale)
    image = [0] + [math.comb(chi, k) % modulus for k in range(1, ctx.M)]
    return _SubstitutionTable(image, ctx.M, modulus)


def normalize_chi(ctx: PrecisionCtx, chi: int) -> int:
    """Reduce a cyclotomic character value to its working residue mod p^(N + K_b)."""
    if chi % ctx.p == 0:
        raise NonUnitChi(chi, ctx.p)
    return chi % ctx.chi_modulus


def teichmuller(ctx: PrecisionCtx, a: int | None = None) -> int:
    """Teichmüller lift of ``a`` (default: the least primitive root mod p) at character precision."""
    if a is None:
        a = int(primitive_root(ctx.p))
    prec = ctx.chi_precision
    return pow(a, ctx.p ** (prec - 1), ctx.p**prec)


def padic_log(x: int, p: int, prec: int) -> int:
    """log(x) mod p^prec for an integer x ≡ 1 mod p."""
    z = x - 1
    vz = valuation(z, p)
    if vz < 1:
        raise ValueError("log needs x ≡ 1 mod p")
    if vz is math.inf:
        return 0
    total = Fraction(0)
    k = 1
    while k * vz - math.log(k, p) < prec + 1:
        total += Fraction((-1) ** (k - 1) * z**k, k)
        k += 1
    return fraction_mod(total, p**prec, p)


class TruncatedSeries:
    """Common arithmetic for 𝔖 and S elements stored in lattice coordinates."""

    __slots__ = ("ctx", "coords")
    kind: ClassVar[str] = ""

    def __init__(self, ctx: PrecisionCtx, coords: Iterable[int]):
        q = ctx.modulus
        values = [int(c) % q for c in coords]
        if len(values) < ctx.M:
            values.extend([0] * (ctx.M - len(values)))
        self.ctx = ctx
        self.coords = tuple(values[: ctx.M])

    @classmethod
    def denominators_for(cls, ctx: PrecisionCtx) -> tuple[int, ...]:
        raise NotImplementedError

    @classmethod
    def zero(cls, ctx: PrecisionCtx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: PrecisionCtx):
        return cls(ctx, (1,))

    @classmethod
    def constant(cls, ctx: PrecisionCtx, value: int):
        return cls(ctx, (value,))

    @classmethod
    def monomial(cls, ctx: PrecisionCtx, k: int, value: int = 1):
        return cls.from_coefficients(ctx, [0] * k + [value])

    @classmethod
    def from_coefficients(cls, ctx: PrecisionCtx, coefficients: Sequence[int]):
        """Element with the given integer u-coefficients."""
        den = cls.denominators_for(ctx)
        return cls(ctx, (c * ctx.p ** den[k] for k, c in enumerate(coefficients[: ctx.M])))

    @classmethod
    def from_fractions(cls, ctx: PrecisionCtx, coefficients: Sequence[Fraction]):
        den = cls.denominators_for(ctx)
        q = ctx.modulus
        coords = []
        for k, value in enumerate(coefficients[: ctx.M]):
            value = Fraction(value) * ctx.p ** den[k]
            try:
                coords.append(fraction_mod(value, q, ctx.p))
            except NotInS:
                raise NotInS(f"coefficient of u^{k} is outside the lattice") from None
        return cls(ctx, coords)

    @classmethod
    def from_scaled(cls, ctx: PrecisionCtx, numerators: Sequence[int], scale: int):
        """Element numerators / p^scale; numerators must be known modulo p^(N+scale)."""
        return cls._from_numerators(ctx, numerators, scale)

    @classmethod
    def _from_numerators(cls, ctx: PrecisionCtx, numerators: Sequence[int], scale: int):
        den = cls.denominators_for(ctx)
        p = ctx.p
        coords = []
        for k, x in enumerate(numerators[: ctx.M]):
            shift = scale - den[k]
            if shift > 0:
                y, rest = divmod(x, p**shift)
                if rest:
                    raise NotInS(f"coefficient of u^{k} is outside the lattice")
            else:
                y = x * p ** (-shift)
            coords.append(y)
        return cls(ctx, coords)

    @classmethod
    def random(cls, ctx: PrecisionCtx, rng: random.Random, degree: int | None = None):
        top = ctx.M if degree is None else min(ctx.M, degree + 1)
        return cls(ctx, [rng.randrange(ctx.modulus) for _ in range(top)])

    @property
    def denominators(self) -> tuple[int, ...]:
        return self.denominators_for(self.ctx)

    def _numerators(self) -> list[int]:
        cap = self.denominators[-1]
        p = self.ctx.p
        return [y * p ** (cap - d) for y, d in zip(self.coords, self.denominators)]

    def _coerce(self, other):
        if isinstance(other, int):
            return self, type(self).constant(self.ctx, other)
        if not isinstance(other, TruncatedSeries):
            return None
        if other.ctx != self.ctx:
            raise ValueError(f"context mismatch: {self.ctx} vs {other.ctx}")
        if type(other) is type(self):
            return self, other
        return ScriptSeries.embed(self), ScriptSeries.embed(other)

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return type(a)(a.ctx, (x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return type(a)(a.ctx, (x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return type(self)(self.ctx, (-x for x in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return type(self)(self.ctx, (x * other for x in self.coords))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        cap = a.denominators[-1]
        product = truncated_product(a._numerators(), b._numerators(), a.ctx.M)
        return type(a)._from_numerators(a.ctx, product, 2 * cap)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = type(self).one(self.ctx), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = type(self).constant(self.ctx, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.ctx != self.ctx:
            return False
        if type(other) is not type(self):
            return ScriptSeries.embed(self).coords == ScriptSeries.embed(other).coords
        return self.coords == other.coords

    def __hash__(self):
        return hash((self.ctx, ScriptSeries.embed(self).coords))

    def __repr__(self):
        terms = [f"{c}*u^{k}" for k, c in enumerate(self.coefficients()) if c]
        return f"{type(self).__name__}({' + '.join(terms) or '0'})"

    def coefficients(self) -> list[Fraction]:
        """Representatives of the u-coefficients as rational numbers."""
        p = self.ctx.p
        return [Fraction(y, p**d) for y, d in zip(self.coords, self.denominators)]

    @property
    def constant_term(self) -> int:
        return self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_unit(self) -> bool:
        return self.coords[0] % self.ctx.p != 0

    def lattice_valuation(self) -> int:
        """Largest a <= N with the element in p^a times the lattice."""
        return min((min(valuation(y, self.ctx.p), self.ctx.N) for y in self.coords), default=self.ctx.N)

    def u_valuation(self) -> int:
        return next((k for k, y in enumerate(self.coords) if y), self.ctx.M)

    def inverse(self):
        if not self.is_unit():
            raise NotAUnit(f"{self!r} has non-unit constant term")
        ctx = self.ctx
        g = type(self).constant(ctx, pow(self.coords[0], -1, ctx.modulus))
        two = type(self).constant(ctx, 2)
        precision, steps = 1, 0
        while precision < ctx.M:
            g = g * (two - self * g)
            precision *= 2
            steps += 1
        logger.debug("newton inverse converged after %d steps", steps)
        return g

    def truncate(self, m: int):
        """Reduction modulo u^m, kept in the same context."""
        return type(self)(self.ctx, self.coords[:m])

    def _substitute(self, table: _SubstitutionTable):
        cap = self.denominators[-1]
        images = table.apply(self._numerators(), self.ctx.M)
        return type(self)._from_numerators(self.ctx, images, cap)

    def frobenius(self, lift: Lift | None = None):
        lift = self.ctx.lift if lift is None else Lift(lift)
        return self._substitute(_frobenius_table(self.ctx, self.kind, lift))

    def gamma(self, chi: int):
        chi = normalize_chi(self.ctx, chi)
        if chi == 1:
            return self
        return self._substitute(_gamma_table(self.ctx, self.kind, chi))

    def derivative(self):
        """d/du; the coefficient of u^(M-1) in the result is not determined and set to zero."""
        p = self.ctx.p
        den = self.denominators
        coords = []
        for k in range(1, self.ctx.M):
            drop = den[k] - den[k - 1]
            coords.append(k * self.coords[k] // p**drop)
        return type(self)(self.ctx, coords)

    def reinterpret(self, ctx: PrecisionCtx):
        """Same coordinates read in another context with identical M and denominators."""
        if ctx.M != self.ctx.M or self.denominators_for(ctx) != self.denominators:
            raise ValueError("contexts have different lattices")
        return type(self)(ctx, self.coords)

    def reduce(self, ctx: PrecisionCtx):
        if ctx.N > self.ctx.N:
            raise ValueError("reduce goes to lower p-adic precision")
        return self.reinterpret(ctx)

    def lift_to(self, ctx: PrecisionCtx):
        """Canonical integer lift to a context with larger N."""
        return self.reinterpret(ctx)

    def exact_div_int(self, n: int, ctx: PrecisionCtx):
        """Quotient by an integer known to divide the element; result lives in ``ctx``."""
        v, w = unit_part(n, self.ctx.p)
        if ctx.N > self.ctx.N - v:
            raise ValueError(f"dividing by p^{v} leaves fewer than {ctx.N} digits")
        pv = self.ctx.p**v
        winv = pow(w, -1, ctx.modulus)
        coords = []
        for y in self.coords:
            if y % pv:
                raise ArithmeticError(f"{n} does not divide the element")
            coords.append(y // pv * winv)
        return type(self)(ctx, coords)

    def to_scaled(self) -> tuple[int, list[int]]:
        """Minimal scale s with p^s times the element integral, and residues mod p^(N+s)."""
        p = self.ctx.p
        scale = 0
        for y, d in zip(self.coords, self.denominators):
            if y:
                scale = max(scale, d - min(valuation(y, p), d))
        modulus = p ** (self.ctx.N + scale)
        nums = []
        for y, d in zip(self.coords, self.denominators):
            if scale >= d:
                nums.append(y * p ** (scale - d) % modulus)
            else:
                nums.append(y // p ** (d - scale) % modulus)
        return scale, nums

    def to_json(self) -> dict:
        scale, nums = self.to_scaled()
        return {"scale": scale, "coeffs": [str(x) for x in nums]}


class SigmaSeries(TruncatedSeries):
    """Element of 𝔖/(p^N, u^M)."""

    __slots__ = ()
    kind = "sigma"

    @classmethod
    def denominators_for(cls, ctx: PrecisionCtx) -> tuple[int, ...]:
        return (0,) * ctx.M


class ScriptSeries(TruncatedSeries):
    """Element of S modulo (p^N Λ, u^M)."""

    __slots__ = ()
    kind = "script"

    @classmethod
    def denominators_for(cls, ctx: PrecisionCtx) -> tuple[int, ...]:
        return ctx.denominators

    @classmethod
    def embed(cls, x: TruncatedSeries) -> "ScriptSeries":
        if isinstance(x, ScriptSeries):
            return x
        p = x.ctx.p
        return cls(x.ctx, (y * p**d for y, d in zip(x.coords, x.ctx.denominators)))


def variable(ctx: PrecisionCtx) -> SigmaSeries:
    return SigmaSeries.monomial(ctx, 1)


def cyclo_E_coefficients(p: int, s: int, length: int) -> list[int]:
    """Exact coefficients of Φ_{p^s}(1+u) = ((1+u)^{p^s} - 1)/((1+u)^{p^(s-1)} - 1)."""
    step = p ** (s - 1)
    return [sum(math.comb(j * step, k) for j in range(p)) for k in range(length)]


def u_level_coefficients(p: int, s: int, length: int) -> list[int]:
    """Coefficients of (1+u)^{p^s} - 1."""
    return [math.comb(p**s, k) if k else 0 for k in range(length)]


@lru_cache(maxsize=None)
def cyclo_E(ctx: PrecisionCtx, s: int | None = None) -> SigmaSeries:
    s = ctx.r if s is None else s
    if s < 1:
        raise ValueError("level must be at least 1")
    return SigmaSeries.from_coefficients(ctx, cyclo_E_coefficients(ctx.p, s, ctx.M))


@lru_cache(maxsize=None)
def element_u0(ctx: PrecisionCtx) -> SigmaSeries:
    return SigmaSeries.from_coefficients(ctx, u_level_coefficients(ctx.p, ctx.r, ctx.M))


def phi_E_coefficients(ctx: PrecisionCtx) -> list[int]:
    if ctx.lift is Lift.STANDARD:
        base = cyclo_E_coefficients(ctx.p, ctx.r, ctx.M)
        return [base[k // ctx.p] if k % ctx.p == 0 else 0 for k in range(ctx.M)]
    return cyclo_E_coefficients(ctx.p, ctx.r + 1, ctx.M)


@lru_cache(maxsize=None)
def element_c(ctx: PrecisionCtx) -> ScriptSeries:
    """The unit c = φ(E)/p of S."""
    return ScriptSeries.from_scaled(ctx, phi_E_coefficients(ctx), 1)


@lru_cache(maxsize=None)
def divided_power_E(ctx: PrecisionCtx, n: int) -> ScriptSeries:
    """E^[n] = E^n / n! as an element of S."""
    v, w = unit_part(math.factorial(n), ctx.p)
    modulus = ctx.p ** (ctx.N + v + ctx.scale_cap)
    base = [c % modulus for c in cyclo_E_coefficients(ctx.p, ctx.r, ctx.M)]
    power = [1] + [0] * (ctx.M - 1)
    exponent = n
    while exponent:
        if exponent & 1:
            power = [c % modulus for c in truncated_product(power, base, ctx.M)]
        base = [c % modulus for c in truncated_product(base, base, ctx.M)]
        exponent >>= 1
    winv = pow(w, -1, modulus)
    return ScriptSeries.from_scaled(ctx, [c * winv % modulus for c in power], v)


def fil_generator_degrees(ctx: PrecisionCtx) -> tuple[int, ...]:
    """Degrees n = p^k of the divided powers E^[n] generating Fil S at this precision."""
    degrees, n = [], 1
    bound = n_max(ctx.p, ctx.N, ctx.M)
    while n <= bound:
        degrees.append(n)
        n *= ctx.p
    return tuple(degrees)


def phi1_divided_power(ctx: PrecisionCtx, n: int) -> ScriptSeries:
    """φ_1(E^[n]) = c^n p^(n-1) / n!."""
    v, w = unit_part(math.factorial(n), ctx.p)
    scalar = ctx.p ** (n - 1 - v) * pow(w, -1, ctx.modulus)
    return element_c(ctx) ** n * scalar


def phi1_fil(ctx: PrecisionCtx, terms: Iterable[tuple[str | int, TruncatedSeries]]) -> ScriptSeries:
    """Divided Frobenius p^(-1)φ on an element of Fil S given as a sum of witnessed terms.

    Each term is ``("E", y)`` for E*y, ``("p", y)`` for p*y, or ``(n, y)`` for E^[n]*y.
    """
    terms = list(terms)
    if not terms:
        raise NotInFil("phi1_fil needs a Fil decomposition")
    total = ScriptSeries.zero(ctx)
    for witness, y in terms:
        image = ScriptSeries.embed(y).frobenius()
        if witness == "p":
            total = total + image
        elif witness == "E":
            total = total + element_c(ctx) * image
        elif isinstance(witness, int) and witness >= 1:
            total = total + phi1_divided_power(ctx, witness) * image
        else:
            raise NotInFil(f"unknown Fil witness {witness!r}")
    return total


@lru_cache(maxsize=None)
def element_t(ctx: PrecisionCtx) -> ScriptSeries:
    """t = log(1 + u0), summed as Σ (-1)^(k-1) u0^k / k for k < M."""
    u0 = u_level_coefficients(ctx.p, ctx.r, ctx.M)
    power = [1] + [0] * (ctx.M - 1)
    total = [Fraction(0)] * ctx.M
    for k in range(1, ctx.M):
        power = truncated_product(power, u0, ctx.M)
        sign = 1 if k % 2 else -1
        for j, c in enumerate(power):
            if c:
                total[j] += Fraction(sign * c, k)
    return ScriptSeries.from_fractions(ctx, total)


@lru_cache(maxsize=None)
def _period_product(ctx: PrecisionCtx) -> ScriptSeries:
    """∏_{n>=1} φ^n(E)/p for the cyclotomic Frobenius; factors become 1 past u-degree M."""
    total = ScriptSeries.one(ctx)
    level = ctx.r + 1
    while True:
        factor = ScriptSeries.from_scaled(ctx, cyclo_E_coefficients(ctx.p, level, ctx.M), 1)
        if factor == 1:
            break
        total = total * factor
        level += 1
    logger.debug("period product stabilised at level %d", level)
    return total


def element_t_product(ctx: PrecisionCtx) -> ScriptSeries:
    """t computed as u0 ∏_{n>=1} φ^n(E)/p."""
    return ScriptSeries.embed(element_u0(ctx)) * _period_product(ctx)


@lru_cache(maxsize=None)
def element_y(ctx: PrecisionCtx) -> ScriptSeries:
    """y = u0 / t, a unit of S with φ(y) = c y."""
    return _period_product(ctx).inverse()


def random_unit(cls, ctx: PrecisionCtx, rng: random.Random, degree: int | None = None):
    x = cls.random(ctx, rng, degree)
    constant = rng.randrange(1, ctx.p) + ctx.p * rng.randrange(ctx.modulus)
    return x - x.constant_term + constant


def _gamma_over_variable(ctx: PrecisionCtx, chi: int, s: int) -> SigmaSeries:
    """γ(v)/v for v = (1+u)^{p^s} - 1, as Σ_{k>=1} C(χ, k) v^(k-1)."""
    v = SigmaSeries.from_coefficients(ctx, u_level_coefficients(ctx.p, s, ctx.M))
    total = SigmaSeries.zero(ctx)
    for k in range(ctx.M, 0, -1):
        total = total * v + math.comb(chi, k) % ctx.modulus
    return total


@lru_cache(maxsize=256)
def gamma_ratio_E(ctx: PrecisionCtx, chi: int) -> SigmaSeries:
    """The unit γ(E)/E, computed without dividing by E since E = u_r / u_(r-1)."""
    chi = normalize_chi(ctx, chi)
    top = _gamma_over_variable(ctx, chi, ctx.r)
    bottom = _gamma_over_variable(ctx, chi, ctx.r - 1)
    return top * bottom.inverse()
