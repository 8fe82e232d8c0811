"""Rank-one Kisin-Ren and Wach lattices as exponent vectors.

A lattice p^c·u^a·∏E_n^{b_n}·𝔖₀·e is stored as the integer vector (c, a, b_1, …, b_R) over the
pairwise coprime primes p, u, E_1, …, E_R of 𝔖₀.  φ acts on exponents by u ↦ u·E_1, E_n ↦ E_{n+1}
and fixes p.  A prime can be inverted, in which case its exponent is meaningless and stored as 0.
"""

import logging
import re
from dataclasses import dataclass, field

from .bt_modules import BTModule
from .exceptions import BadLevels, BudgetExceeded, IncompatibleBases, NotRank1

logger = logging.getLogger(__name__)

#: Extra E-indices kept beyond the level so that φ-pullbacks have headroom.
HEADROOM = 4

_FACTOR = re.compile(r"^(?:(?P<int>-?\d+)|(?P<name>p|u|E(?P<index>\d+))(?:\^(?P<exp>-?\d+))?)$")


def prime_names(size: int) -> tuple[str, ...]:
    return ("p", "u") + tuple(f"E{n}" for n in range(1, size - 1))


def _render(exponents: tuple[int, ...], inverted: tuple[bool, ...] = ()) -> str:
    names = prime_names(len(exponents))
    parts = []
    for k, (name, x) in enumerate(zip(names, exponents)):
        if inverted and inverted[k]:
            parts.append(f"{name}^-inf")
        elif x == 1:
            parts.append(name)
        elif x:
            parts.append(f"{name}^{x}")
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class Alpha:
    """φ(e) = unit·p^c·u^a·∏E_n^{b_n}·e; the unit never changes a lattice."""

    unit: int
    exponents: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.exponents)

    @property
    def height(self) -> int:
        return sum(self.exponents[2:])

    def support(self) -> tuple[int, ...]:
        """E-indices n with a nonzero exponent."""
        return tuple(n for n, b in enumerate(self.exponents[2:], start=1) if b)

    def __str__(self) -> str:
        monomial = _render(self.exponents)
        if self.unit == 1:
            return monomial
        return str(self.unit) if monomial == "1" else f"{self.unit}*{monomial}"

    def to_json(self) -> dict:
        return {"unit": self.unit, "exponents": list(self.exponents), "monomial": str(self)}


@dataclass(frozen=True)
class MonomialLattice:
    alpha: Alpha
    exponents: tuple[int, ...]
    inverted: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if len(self.exponents) != self.alpha.size:
            raise IncompatibleBases("exponent vector and base have different prime budgets")
        if not self.inverted:
            object.__setattr__(self, "inverted", (False,) * len(self.exponents))
        normalized = tuple(0 if flag else x for x, flag in zip(self.exponents, self.inverted))
        object.__setattr__(self, "exponents", normalized)

    @classmethod
    def free(cls, alpha: Alpha) -> "MonomialLattice":
        """𝔖₀·e."""
        return cls(alpha, (0,) * alpha.size)

    @property
    def budget(self) -> int:
        return self.alpha.size - 2

    def __str__(self) -> str:
        return f"{_render(self.exponents, self.inverted)}·S0·e"

    def to_json(self) -> dict:
        names = prime_names(len(self.exponents))
        return {
            "alpha": self.alpha.to_json(),
            "exponents": {name: x for name, x, flag in zip(names, self.exponents, self.inverted) if not flag},
            "inverted": [name for name, flag in zip(names, self.inverted) if flag],
            "lattice": str(self),
        }


def parse_alpha(text: str, r: int, budget: int | None = None, p: int | None = None) -> Alpha:
    """Read a monomial such as ``"2*E1^2*u"``; integer factors form the unit, p-powers are written p^k.

    With ``p`` given, an integer factor divisible by p is rejected.
    """
    size = (r + HEADROOM if budget is None else budget) + 2
    exponents = [0] * size
    unit = 1
    for raw in text.replace(" ", "").split("*"):
        match = _FACTOR.match(raw)
        if not raw or match is None:
            raise ValueError(f"cannot parse factor {raw!r} of alpha={text!r}")
        if match["int"] is not None:
            value = int(match["int"])
            if value == 0:
                raise ValueError("alpha must be nonzero")
            if p is not None and value % p == 0:
                raise ValueError(f"integer factor {value} of alpha={text!r} is not a unit; write powers of p as p^k")
            unit *= value
            continue
        power = int(match["exp"]) if match["exp"] is not None else 1
        if match["name"] == "p":
            exponents[0] += power
        elif match["name"] == "u":
            exponents[1] += power
        else:
            index = int(match["index"])
            if index < 1:
                raise ValueError("E-indices start at 1")
            if index > size - 2:
                raise BudgetExceeded(f"E{index} is beyond the prime budget E1..E{size - 2}")
            exponents[index + 1] += power
    return Alpha(unit, tuple(exponents))


def _same_base(first: MonomialLattice, second: MonomialLattice):
    if first.alpha.exponents != second.alpha.exponents:
        raise IncompatibleBases(f"lattices over {first.alpha} and {second.alpha}")


def phi_pullback(L: MonomialLattice) -> MonomialLattice:
    """Exponents of the image of φ*L: φ applied to the monomial, then multiplied by α."""
    x, flags, alpha = L.exponents, L.inverted, L.alpha.exponents
    if x[-1] or flags[-1] or alpha[-1]:
        raise BudgetExceeded(f"E{L.budget} would be pushed past the prime budget")
    out = [x[0] + alpha[0], x[1] + alpha[1]]
    out_flags = [flags[0], flags[1]]
    # E_n of the image comes from u (n = 1) or from E_{n-1}, both stored at index n
    for n in range(1, L.budget + 1):
        out.append(x[n] + alpha[n + 1])
        out_flags.append(flags[n])
    return MonomialLattice(L.alpha, tuple(out), tuple(out_flags))


def intersect(first: MonomialLattice, second: MonomialLattice) -> MonomialLattice:
    """Exponent-wise max; a prime stays inverted only when it is inverted in both."""
    _same_base(first, second)
    exponents, flags = [], []
    for x, fx, y, fy in zip(first.exponents, first.inverted, second.exponents, second.inverted):
        if fx and fy:
            exponents.append(0)
        elif fx:
            exponents.append(y)
        elif fy:
            exponents.append(x)
        else:
            exponents.append(max(x, y))
        flags.append(fx and fy)
    return MonomialLattice(first.alpha, tuple(exponents), tuple(flags))


def _prime_index(L: MonomialLattice, prime: str) -> int:
    names = prime_names(len(L.exponents))
    if prime not in names[1:]:
        raise ValueError(f"can only invert u or one of E1..E{L.budget}, not {prime!r}")
    return names.index(prime)


def invert_prime(L: MonomialLattice, prime: str) -> MonomialLattice:
    index = _prime_index(L, prime)
    flags = list(L.inverted)
    flags[index] = True
    return MonomialLattice(L.alpha, L.exponents, tuple(flags))


def require_level_support(alpha: Alpha, r: int) -> None:
    """The level-r translations are defined for α supported on E_1, …, E_r."""
    beyond = [n for n in alpha.support() if n > r]
    if beyond:
        raise BadLevels(f"alpha={alpha} involves E{beyond[0]}, beyond level r={r}")


def positive_part(alpha: Alpha) -> MonomialLattice:
    """D⁺ inside the ambient module: u- and E-exponents at least 0 with p left free."""
    flags = (True,) + (False,) * (alpha.size - 1)
    return MonomialLattice(alpha, (0,) * alpha.size, flags)


def kr_lattice(alpha: Alpha, r: int) -> MonomialLattice:
    """The unique lattice E-monomial·𝔖₀·e whose φ-cokernel is a power of E_r.

    The u- and p-exponents are normalized to 0; the E_r-power is the height of α.
    """
    if not 1 <= r <= alpha.size - 2:
        raise BudgetExceeded(f"level {r} outside the prime budget")
    require_level_support(alpha, r)
    b = alpha.exponents[2:]
    exponents = [0, 0]
    for n in range(1, len(b) + 1):
        exponents.append(sum(b[:n]) if n < r else -sum(b[n:]))
    return MonomialLattice(alpha, tuple(exponents))


def cokernel_exponents(L: MonomialLattice) -> tuple[int, ...]:
    """Exponents of φ*L relative to L."""
    image = phi_pullback(L)
    return tuple(y - x for x, y in zip(L.exponents, image.exponents))


def is_kisin_ren(L: MonomialLattice, r: int) -> bool:
    """φ*L ⊆ L with a cokernel killed by a power of E_r alone."""
    if any(L.inverted) or r > L.budget:
        return False
    try:
        diff = cokernel_exponents(L)
    except BudgetExceeded:
        return False
    k = r + 1
    return diff[k] >= 0 and all(x == 0 for i, x in enumerate(diff) if i != k)


def wach_from_kr(M: MonomialLattice, r: int) -> MonomialLattice:
    """N = D⁺ ∩ M[E_n^{-1}] for n = 1, …, r."""
    require_level_support(M.alpha, r)
    localized = M
    for n in range(1, r + 1):
        localized = invert_prime(localized, f"E{n}")
    return intersect(positive_part(M.alpha), localized)


@dataclass(frozen=True)
class KRTranslation:
    lattice: MonomialLattice
    #: i with N_{i+1} = N_i, counted from N_1 = N; None when the prime budget ran out first
    stable_after: int | None
    history: tuple[MonomialLattice, ...]


def _recursion_step(N: MonomialLattice, r: int) -> MonomialLattice:
    return intersect(invert_prime(phi_pullback(N), f"E{r}"), N)


def kr_from_wach(N: MonomialLattice, r: int) -> KRTranslation:
    """N_1 = N and N_{i+1} = φ*(N_i)[E_r^{-1}] ∩ N_i; returns N_r.

    The recursion runs until a step leaves the lattice unchanged, so the result also records
    after how many lattices it stabilized.  Once stable it stays stable, hence N_r is the last
    lattice when stabilization happens before r.
    """
    require_level_support(N.alpha, r)
    history = [N]
    stable_after = None
    while stable_after is None:
        try:
            following = _recursion_step(history[-1], r)
        except BudgetExceeded:
            if len(history) < r:
                raise
            break
        if following == history[-1]:
            stable_after = len(history)
        else:
            history.append(following)
    logger.debug("kr_from_wach(r=%d): stable after %s lattice(s)", r, stable_after)
    return KRTranslation(history[min(r, len(history)) - 1], stable_after, tuple(history))


def predicted_stabilization(alpha: Alpha, r: int) -> int:
    """Number of lattices the recursion produces from 𝔖₀·e before it stops changing.

    For nonnegative E-exponents the i-th lattice carries the sums of the last i - 1 exponents of
    α, so it is final once the window reaches the smallest E-index below r in the support.
    """
    below = [n for n in alpha.support() if n < r]
    return r - min(below) + 1 if below else 1


def lambda_r0_transport(module: BTModule) -> Alpha:
    """α of a rank-one BT module at level r after sending E to E_r.

    A = unit·E^h with h in {0, 1}; the unit recorded is the constant term of the unit part.
    """
    if module.n != 1:
        raise NotRank1(f"expected a rank-one module, got rank {module.n}")
    ctx = module.frame.ctx
    a, b = module.A[0][0], module.B[0][0]
    if a.is_unit():
        height, unit = 0, a
    elif b.is_unit():
        height, unit = 1, b.inverse()
    else:
        raise NotRank1("neither A nor B is a unit; the module is not of E-height one")
    exponents = [0] * (ctx.r + HEADROOM + 2)
    exponents[ctx.r + 1] = height
    return Alpha(unit.constant_term % ctx.modulus, tuple(exponents))
