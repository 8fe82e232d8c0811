"""Named property suites run by ``cyclowin suite``.

Every suite returns a list of :class:`~cyclowin.checks.CheckReport`, one per property group, in a
fixed order.  Randomness comes from ``random.Random`` seeded with ``"{seed}:{suite}"`` so a suite
gives the same cases whether it runs alone or as part of ``all``.
"""

import logging
import random
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .bt_modules import (
    adjugate_certificate,
    bt_check,
    bt_dual,
    bt_roundtrip,
    random_bt_module,
    supersingular_module,
    win_to_bt,
    window_roundtrip_iso,
)
from .checks import CheckReport
from .exceptions import BadLevels, CyclowinError, NotNilpotent
from .frames import (
    frame_check,
    hom_check,
    hom_gamma,
    hom_lambda,
    hom_lambda_rs,
    hom_level,
    hom_quotient,
    script_frame,
    sigma_frame,
    zp_frame,
)
from .gamma_calculus import (
    act_bt_to_win,
    act_dual,
    action_check,
    connection_residual,
    divided_power_scont_check,
    gamma_bound_check,
    gamma_close_check,
    gammafs_check,
    in_ideal,
    is_horizontal,
    lambda_gamma,
    n_operator,
    n_s,
    nm_check,
    scont_check,
    solve_connection,
    solve_neumann,
    strictness_check,
    transfer_roundtrip_check,
    twist_action,
    window_transfer_roundtrip_check,
)
from .linalg import is_invertible, is_zero_matrix, transpose, zeros
from .padic_rings import (
    Lift,
    PrecisionCtx,
    ScriptSeries,
    SigmaSeries,
    element_c,
    element_t,
    element_t_product,
    element_u0,
    element_y,
    gamma_ratio_E,
    normalize_chi,
)
from .wach import (
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
    predicted_stabilization,
    wach_from_kr,
)
from .windows import (
    FilteredMatrix,
    base_change,
    coboundary,
    d1_from_gamma,
    dual,
    dual_twist_iso,
    fv_pair,
    hom_reduces_to_identity,
    lift_difference,
    lift_isomorphism,
    lift_window,
    lifts_isomorphic,
    random_window,
    reduce_mod_pn,
    torsor_action,
    unit_window,
    window_check,
    window_hom_check,
)
from .zoo import ZooObject, build, gm_dual_unit_action, gm_y_isomorphism, zoo_names

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteContext:
    ctx: PrecisionCtx
    seed: int = 7
    cases: int = 100

    def rng(self, label: str) -> random.Random:
        return random.Random(f"{self.seed}:{label}")

    def count(self, wanted: int) -> int:
        """``wanted`` randomized cases, capped by --cases."""
        return max(1, min(wanted, self.cases))

    @property
    def cyclotomic(self) -> PrecisionCtx:
        return self.ctx.with_lift(Lift.CYCLOTOMIC)

    @property
    def standard(self) -> PrecisionCtx:
        return self.ctx.with_lift(Lift.STANDARD)


@dataclass(frozen=True)
class Suite:
    name: str
    summary: str
    run: Callable[[SuiteContext], list[CheckReport]] = field(repr=False)


@dataclass
class SuiteResult:
    suite: Suite
    reports: list[CheckReport]

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)


SUITES: dict[str, Suite] = {}


def suite(name: str, summary: str):
    def register(fn):
        SUITES[name] = Suite(name, summary, fn)
        return fn

    return register


@contextmanager
def _case(report: CheckReport, label: str):
    """Turn a library error inside one case into a recorded failure."""
    try:
        yield
    except CyclowinError as exc:
        report.expect(False, f"{label}: {type(exc).__name__}: {exc}")


def random_chi(ctx: PrecisionCtx, rng: random.Random) -> int:
    while True:
        chi = rng.randrange(1, ctx.modulus)
        if chi % ctx.p:
            return chi


def chi_near_one(ctx: PrecisionCtx, rng: random.Random, s: int) -> int:
    return 1 + ctx.p**s * rng.randrange(ctx.modulus)


@lru_cache(maxsize=8)
def zoo_objects(ctx: PrecisionCtx) -> tuple[ZooObject, ...]:
    return tuple(build(name, ctx) for name in zoo_names())


def random_filtered(frame, types, rng: random.Random, degree: int = 3) -> FilteredMatrix:
    def entry(i, j):
        if not types[i] and types[j]:
            return frame.random_fil(rng, degree)
        return frame.random_element(rng, degree)

    return FilteredMatrix.build(frame, types, types, entry)


@suite("ring-action", "ring axioms, φγ = γφ, the action law and divisibility of (γ-1)x by φ^s(u)")
def ring_action(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("ring-action")
    reports = []
    for cls in (SigmaSeries, ScriptSeries):
        axioms = CheckReport(f"ring-axioms[{cls.__name__}]")
        action = CheckReport(f"phi-gamma[{cls.__name__}]")
        for _ in range(sc.count(100)):
            x, y, z = (cls.random(ctx, rng) for _ in range(3))
            axioms.expect((x + y) * z == x * z + y * z, "distributivity fails")
            axioms.expect((x * y) * z == x * (y * z), "associativity fails")
            axioms.expect(x * y == y * x, "commutativity fails")
            axioms.expect(x - x == cls.zero(ctx) and x * cls.one(ctx) == x, "additive or multiplicative identity")
            axioms.expect((x * y).frobenius() == x.frobenius() * y.frobenius(), "phi is not multiplicative")
            chi1, chi2 = random_chi(ctx, rng), random_chi(ctx, rng)
            action.expect(x.frobenius().gamma(chi1) == x.gamma(chi1).frobenius(), f"phi gamma != gamma phi ({chi1})")
            action.expect(x.gamma(chi1).gamma(chi2) == x.gamma(chi1 * chi2), f"action law fails for {chi1}, {chi2}")
            action.expect((x * y).gamma(chi1) == x.gamma(chi1) * y.gamma(chi1), "gamma is not multiplicative")
        reports += [axioms, action]
    divisibility = CheckReport("gamma-minus-one-divisibility")
    for i in range(sc.count(12)):
        s = i % 3
        chi = chi_near_one(ctx, rng, s) if s else random_chi(ctx, rng)
        with _case(divisibility, f"s={s}"):
            divisibility.expect(gammafs_check(SigmaSeries.random(ctx, rng), chi, s), f"s={s}, chi={chi}")
    reports.append(divisibility)
    return reports


@suite("t-element", "t = log(1+u0) against its product formula, φ(t) = pt, γ(t) = χt and t = u0·unit")
def t_element(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("t-element")
    t, y = element_t(ctx), element_y(ctx)
    report = CheckReport("t")
    report.expect(t == element_t_product(ctx), "log series and product formula differ")
    report.expect(t.frobenius() == t * ctx.p, "phi(t) != p t")
    report.expect(t * y == ScriptSeries.embed(element_u0(ctx)), "t * y != u0")
    report.expect(y.is_unit(), "y = u0/t is not a unit")
    report.expect(y.frobenius() == element_c(ctx) * y, "phi(y) != c y")
    p = ScriptSeries.constant(ctx, ctx.p)
    report.expect(in_ideal(t ** (ctx.p - 1), [p]), "t^(p-1) is not in pS")
    report.expect(in_ideal(ScriptSeries.embed(element_u0(ctx)) ** (ctx.p - 1), [p]), "u0^(p-1) is not in pS")
    for _ in range(sc.count(20)):
        chi = random_chi(ctx, rng)
        report.expect(t.gamma(chi) == t * normalize_chi(ctx, chi), f"gamma(t) != chi t for chi={chi}")
    continuity = CheckReport("gamma-continuity-on-S")
    for _ in range(sc.count(8)):
        chi = chi_near_one(ctx, rng, ctx.r)
        continuity.expect(scont_check(ScriptSeries.random(ctx, rng, 6), chi), f"(gamma-1)x not in tS, chi={chi}")
    continuity.merge(divided_power_scont_check(ctx, chi_near_one(ctx, rng, ctx.r)))
    return [report, continuity]


@suite("frame-window-axioms", "frame and homomorphism axioms, window axioms and FV = VF = ϖ")
def frame_window_axioms(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("frame-window-axioms")
    frames = [sigma_frame(ctx), script_frame(ctx), zp_frame(ctx), sigma_frame(sc.standard), script_frame(sc.standard)]
    reports = [frame_check(frame, rng, strict=False) for frame in frames]
    sigma = frames[0]
    homs = [
        hom_lambda(ctx),
        hom_gamma(sigma, random_chi(ctx, rng)),
        hom_gamma(frames[1], random_chi(ctx, rng)),
        hom_level(sigma),
        hom_lambda_rs(sigma, 0),
        hom_quotient(sigma),
    ]
    reports += [hom_check(h, rng, strict=False) for h in homs]
    zoo = CheckReport("zoo-windows")
    for obj in zoo_objects(ctx):
        zoo.merge(window_check(obj.window, rng, strict=False))
        zoo.merge(window_check(obj.script, rng, strict=False))
    reports.append(zoo)
    windows = CheckReport("random-windows")
    for i in range(sc.count(100)):
        frame = frames[i % 2]
        W = random_window(frame, rng, 1 + i % 3)
        windows.merge(window_check(W, rng, samples=1, strict=False))
    reports.append(windows)
    return reports


@suite("duality", "double duality, F/V exchange, dual of Q_p/Z_p is Ĝ_m, and base change of duals")
def duality(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("duality")
    sigma, script = sigma_frame(ctx), script_frame(ctx)
    windows = CheckReport("window-duality")
    strict = CheckReport("strict-base-change")
    twisted = CheckReport("lambda-base-change-via-y")
    for i in range(sc.count(30)):
        frame = (sigma, script)[i % 2]
        W = random_window(frame, rng, 1 + i % 3, degree=2)
        windows.expect(dual(dual(W)) == W, "double dual differs")
        F, V = fv_pair(W)
        windows.expect(fv_pair(dual(W)) == (transpose(V), transpose(F)), "dual does not swap F and V")
        if frame is sigma:
            for h in (hom_level(sigma), hom_lambda_rs(sigma, 0)):
                strict.expect(base_change(dual(W), h) == dual(base_change(W, h)), f"along {h.kind}")
            with _case(twisted, "y-twist"):
                f = dual_twist_iso(W)
                twisted.merge(window_hom_check(f, strict=False))
                twisted.expect(is_invertible(f.matrix.values()), "y-twist is not invertible")
        else:
            h = hom_gamma(script, random_chi(ctx, rng))
            strict.expect(base_change(dual(W), h) == dual(base_change(W, h)), "along gamma on S")
    tate, gm = build("tate", ctx), build("gm", ctx)
    zoo = CheckReport("tate-gm-duality")
    zoo.expect(act_dual(tate.action) == gm.action, "dual of the Q_p/Z_p window action is not the Gm action")
    zoo.expect(act_dual(tate.bt_action) == gm.bt_action, "dual of the Q_p/Z_p BT action is not the Gm action")
    zoo.expect(act_dual(gm.action) == tate.action, "dual of the Gm window action is not the Q_p/Z_p action")
    zoo.merge(window_hom_check(gm_y_isomorphism(gm), strict=False))
    carried = gm_dual_unit_action(gm)
    zoo.expect(carried.generators == act_dual(tate.script_action).generators, "y does not carry Gm onto S^t")
    return [windows, strict, twisted, zoo]


@suite("win-bt", "windows and BT modules: round trips, AB = BA = E, duality and Γ-action transfer")
def win_bt(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("win-bt")
    frame = sigma_frame(ctx)
    windows = CheckReport("window-roundtrip")
    for i in range(sc.count(40)):
        W = random_window(frame, rng, 1 + i % 3, degree=2)
        with _case(windows, "roundtrip"):
            window_roundtrip_iso(W)
            module = win_to_bt(W)
            windows.merge(bt_check(module, strict=False))
            windows.expect(win_to_bt(dual(W)) == bt_dual(module), "win_to_bt does not commute with duality")
    modules = CheckReport("bt-roundtrip")
    for i in range(sc.count(40)):
        module = random_bt_module(frame, rng, 1 + i % 3)
        with _case(modules, "roundtrip"):
            modules.merge(bt_check(module, strict=False))
            modules.merge(bt_roundtrip(module).check(strict=False))
            modules.expect(adjugate_certificate(module), "det(A) B != E adj(A)")
    supersingular = supersingular_module(frame)
    modules.merge(bt_check(supersingular, strict=False))
    modules.merge(bt_roundtrip(supersingular).check(strict=False))
    actions = CheckReport("action-transfer")
    objects = {obj.name: obj for obj in zoo_objects(ctx)}
    for obj in objects.values():
        with _case(actions, obj.name):
            actions.merge(action_check(obj.action, strict=False))
            actions.merge(action_check(obj.bt_action, strict=False))
            actions.expect(transfer_roundtrip_check(obj.bt_action), f"{obj.name}: BT -> Win -> BT transfer")
            actions.expect(window_transfer_roundtrip_check(obj.action), f"{obj.name}: Win -> BT -> Win transfer")
            actions.merge(action_check(act_bt_to_win(obj.bt_action), strict=False))
    E, one = frame.generators[0], frame.one()
    tate, gm = objects["tate"].bt, objects["gm"].bt
    actions.expect(tate.A == ((one,),) and tate.B == ((E,),), "Q_p/Z_p is not (S, phi)")
    actions.expect(gm.A == ((E,),) and gm.B == ((one,),), "Gm is not (S, E phi)")
    return [windows, modules, actions]


@suite("lift-torsor", "lifts mod p^(n+1) form a torsor under D^1, and d(α)-twists give isomorphic lifts")
def lift_torsor(sc: SuiteContext) -> list[CheckReport]:
    rng = sc.rng("lift-torsor")
    reports = []
    for n in (1, 2):
        if n + 1 > sc.ctx.N:
            continue
        ctx = sc.ctx.mod_pn(n + 1)
        frame = sigma_frame(ctx)
        report = CheckReport(f"torsor[n={n}]")
        for i in range(sc.count(10)):
            W = random_window(frame, rng, 1 + i % 2, degree=2)
            W_bar, W_n = reduce_mod_pn(W, 1), reduce_mod_pn(W, n)
            bar = W_bar.frame
            gamma = tuple(tuple(bar.random_element(rng, 3) for _ in range(W.n)) for _ in range(W.n))
            G, G1 = d1_from_gamma(W_bar, gamma)
            with _case(report, "torsor action"):
                lifted = lift_window(W_n, G, G1)
                report.merge(window_check(lifted, rng, samples=1, strict=False))
                report.expect(reduce_mod_pn(lifted, n) == W_n, "lift does not reduce to W_n")
                moved = torsor_action(W, G, G1, n)
                report.expect(lift_difference(moved, W, n) == gamma, "torsor action moved by the wrong class")
            alpha = random_filtered(bar, W.types, rng)
            with _case(report, "coboundary twist"):
                W_a = torsor_action(W, *d1_from_gamma(W_bar, coboundary(W_bar, alpha)), n)
                found = lifts_isomorphic(W_a, W, n)
                if report.expect(found is not None, "a d(alpha)-twisted lift is not isomorphic"):
                    report.merge(window_hom_check(lift_isomorphism(W_a, W, n, found), strict=False))
        unit = unit_window(frame)
        unit_bar = reduce_mod_pn(unit, 1)
        constant = ((unit_bar.frame.one(),),)
        with _case(report, "non-coboundary"):
            W_c = torsor_action(unit, *d1_from_gamma(unit_bar, constant), n)
            report.expect(lifts_isomorphic(W_c, unit, n) is None, "constant class is a coboundary")
            report.expect(not hom_reduces_to_identity(W_c, unit, n), "hom_solve finds an isomorphism of lifts")
        reports.append(report)
    return reports


@suite("lambda-gamma", "λ_γ: functional equation, cocycle, λ ≡ 1 mod u and independence of the level")
def lambda_suite(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("lambda-gamma")
    report = CheckReport("lambda")
    level = hom_level(sigma_frame(ctx))
    higher = ctx.at_level(ctx.r + 1)
    for _ in range(sc.count(50)):
        chi1, chi2 = random_chi(ctx, rng), random_chi(ctx, rng)
        lam1, lam2 = lambda_gamma(ctx, chi1).value, lambda_gamma(ctx, chi2).value
        report.expect(lam1.constant_term == 1, f"lambda is not 1 mod u for chi={chi1}")
        report.expect(lam1.frobenius() == lam1 * gamma_ratio_E(ctx, chi1), f"phi(lambda) != lambda w, chi={chi1}")
        product = lambda_gamma(ctx, normalize_chi(ctx, chi1 * chi2)).value
        report.expect(product == lam1 * lam2.gamma(chi1), f"cocycle fails for {chi1}, {chi2}")
    for chi in (4, 1 + ctx.p, random_chi(ctx, rng)):
        image = level.apply(lambda_gamma(ctx, chi).value)
        report.expect(image == lambda_gamma(higher, chi).value, f"lambda depends on the level for chi={chi}")
    return [report]


@suite("le-strictm", "(γ-1)^(n+1) M ⊆ (t, p^r)^n tM and (γ-1) M ⊆ (t, p)^m tM near 1 on the zoo")
def strict_bounds(sc: SuiteContext) -> list[CheckReport]:
    ctx = sc.cyclotomic
    reports = []
    for obj in zoo_objects(ctx):
        report = CheckReport(f"bounds[{obj.name}]")
        act = obj.script_action
        report.expect(strictness_check(obj.action, 0), "action is not strict")
        report.expect(not strictness_check(twist_action(obj.action), 0), "Teichmuller twist is strict")
        with _case(report, "bounds"):
            for n in range(4):
                report.expect(gamma_bound_check(act, 1 + ctx.p**ctx.r, n), f"(gamma-1)^{n + 1} bound")
            for m in range(3):
                chi = 1 + ctx.p ** (ctx.r + m)
                report.expect(gamma_close_check(act, chi, m), f"(gamma-1) bound for chi={chi}")
        reports.append(report)
    return reports


@suite("le-winsnm", "N_M: image in tM, commutes with Φ and Γ, Leibniz over N_S, independent of γ")
def monodromy(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.cyclotomic, sc.rng("le-winsnm")
    reports = []
    for obj in zoo_objects(ctx):
        report = CheckReport(f"n_operator[{obj.name}]")
        with _case(report, "N_M"):
            op = n_operator(obj.script_action)
            report.merge(nm_check(op, rng))
            if obj.name == "tate":
                u = ScriptSeries.monomial(ctx, 1)
                expected = (ScriptSeries.one(ctx) + u) * element_t(ctx)
                report.expect(op.apply((u,)) == (expected,), "N_M(u e) != (1+u) t e")
            if obj.name == "gm":
                y = element_y(ctx)
                report.expect(op.matrix == ((n_s(y) * y.inverse(),),), "N_M(e) != N_S(y)/y e")
        reports.append(report)
    return reports


@suite("connection", "Neumann solution of C - U(C) = D, horizontality and D = 0 ⇒ C = 0")
def connection(sc: SuiteContext) -> list[CheckReport]:
    ctx, rng = sc.standard, sc.rng("connection")
    frame = script_frame(ctx)
    report = CheckReport("connection")
    for i in range(sc.count(50)):
        W = random_window(frame, rng, 1 + i % 3, degree=2)
        with _case(report, "solve"):
            solution = solve_connection(W)
            report.expect(is_zero_matrix(connection_residual(W, solution)), "C - U(C) - D != 0")
            report.expect(is_horizontal(W, solution.C), "solution is not horizontal")
            C, _ = solve_neumann(W, zeros(ScriptSeries, ctx, W.n, W.n))
            report.expect(is_zero_matrix(C), "D = 0 does not give C = 0")
    W = random_window(script_frame(sc.cyclotomic), rng, 1)
    try:
        solve_connection(W)
    except NotNilpotent:
        pass
    else:
        report.expect(False, "the cyclotomic lift was accepted")
    return [report]


def _rejects_level(alpha: Alpha, r: int) -> bool:
    try:
        kr_lattice(alpha, r)
    except BadLevels:
        return True
    return False


@suite("wach-kr", "rank-one Kisin-Ren and Wach lattices: translation round trips and stabilization")
def wach_kr(sc: SuiteContext) -> list[CheckReport]:
    calculus = CheckReport("monomial-calculus")
    alpha = parse_alpha("1", 1)
    free = MonomialLattice.free(alpha)
    u_lattice = MonomialLattice(alpha, (0, 1) + (0,) * (alpha.size - 2))
    e1_lattice = MonomialLattice(alpha, (0, 0, 1) + (0,) * (alpha.size - 3))
    p_lattice = MonomialLattice(alpha, (1,) + (0,) * (alpha.size - 1))
    calculus.expect(phi_pullback(free) == free, "phi*(S e) != S e")
    calculus.expect(phi_pullback(u_lattice).exponents[1:3] == (1, 1), "phi*(u S e) != u E1 S e")
    calculus.expect(phi_pullback(e1_lattice).exponents[2:4] == (0, 1), "phi*(E1 S e) != E2 S e")
    calculus.expect(intersect(u_lattice, p_lattice).exponents[:2] == (1, 1), "uS cap pS != upS")
    calculus.expect(intersect(invert_prime(free, "E1"), free) == free, "S[1/E1] cap S != S")
    for L in (free, u_lattice, e1_lattice, p_lattice):
        calculus.expect(intersect(L, L) == L, "intersection is not idempotent")
        calculus.expect(intersect(L, u_lattice) == intersect(u_lattice, L), "intersection is not commutative")
    translation = CheckReport("kr-wach-translation")
    for r in (1, 2):
        for text in ("1", "E1", "E2", "2*E1", "E1^2"):
            alpha = parse_alpha(text, r)
            if any(n > r for n in alpha.support()):
                translation.expect(_rejects_level(alpha, r), f"alpha={text}, r={r}: translated beyond its level")
                continue
            M = kr_lattice(alpha, r)
            translation.expect(is_kisin_ren(M, r), f"alpha={text}, r={r}: not a Kisin-Ren lattice")
            N = wach_from_kr(M, r)
            result = kr_from_wach(N, r)
            translation.expect(result.lattice == M, f"alpha={text}, r={r}: kr(wach(M)) != M")
            translation.expect(wach_from_kr(result.lattice, r) == N, f"alpha={text}, r={r}: wach(kr(N)) != N")
            translation.expect(
                result.stable_after == predicted_stabilization(alpha, r),
                f"alpha={text}, r={r}: stabilized after {result.stable_after} lattices",
            )
            if r == 1:
                translation.expect(result.lattice == N, f"alpha={text}: r = 1 is not the identity")
    transport = CheckReport("lambda-r0-transport")
    ctx = sc.cyclotomic
    expected = {"tate": (1, 0), "gm": (1, 1), "tate_twist": (2, 0), "gm_twist": (2, 1)}
    for obj in zoo_objects(ctx):
        if obj.name not in expected:
            continue
        alpha = lambda_r0_transport(obj.bt)
        unit, height = expected[obj.name]
        transport.expect(alpha.unit == unit % ctx.modulus, f"{obj.name}: unit {alpha.unit}")
        transport.expect(alpha.support() == ((ctx.r,) if height else ()), f"{obj.name}: alpha = {alpha}")
    return [calculus, translation, transport]


def suite_names() -> tuple[str, ...]:
    return tuple(SUITES)


def run_suite(name: str, sc: SuiteContext) -> SuiteResult:
    try:
        entry = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    try:
        reports = entry.run(sc)
    except CyclowinError as exc:
        reports = [CheckReport(name, [f"{type(exc).__name__}: {exc}"])]
    result = SuiteResult(entry, reports)
    logger.debug("suite %s: %d report(s), passed=%s", name, len(reports), result.passed)
    return result


def run_suites(names, sc: SuiteContext) -> list[SuiteResult]:
    names = suite_names() if names in ("all", ["all"], ("all",)) else names
    return [run_suite(name, sc) for name in names]
