"""Command line front end: build objects, run single operations and execute the property suites.

Exit codes: 0 when every invoked check passes, 1 when a check fails or the library raises, 2 for
usage errors and invalid precision settings.
"""

import argparse
import logging
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

import structlog
from pydantic import BaseModel, ValidationError

from . import __version__, default_settings
from .bt_modules import bt_check, bt_dual, bt_roundtrip, random_bt_module
from .exceptions import CyclowinError
from .frames import frame_check, script_frame, sigma_frame, zp_frame
from .gamma_calculus import lambda_gamma, n_operator, nm_check, strictness_check
from .padic_rings import Lift, PrecisionCtx, TruncatedSeries
from .serialization import (
    BTModel,
    CheckModel,
    ContextModel,
    FrameModel,
    RunModel,
    SeriesModel,
    SuiteModel,
    TranslationModel,
    WindowModel,
    ZooModel,
    dumps,
    matrix_json,
)
from .suites import SUITES, SuiteContext, run_suites
from .wach import MonomialLattice, is_kisin_ren, kr_from_wach, kr_lattice, parse_alpha, wach_from_kr
from .windows import dual, random_window, window_check
from .zoo import build, zoo_names

logger = structlog.get_logger(__name__)

FRAMES = {"sigma": sigma_frame, "script": script_frame, "zp": zp_frame}


@dataclass
class Outcome:
    payload: BaseModel | dict
    passed: bool = True
    lines: list[str] = field(default_factory=list)


def configure_logging(json_logs: bool = False, verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if verbose else logging.WARNING, format="%(message)s")
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper("iso", utc=False),
            structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(sys.stderr),
        cache_logger_on_first_use=False,
    )


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help=f"the prime (default {default_settings['p']})")
    common.add_argument("--pprec", type=int, dest="N", help=f"p-adic precision N (default {default_settings['N']})")
    common.add_argument("--uprec", type=int, dest="M", help=f"u-adic precision M (default {default_settings['M']})")
    common.add_argument("--level", type=int, dest="r", help=f"cyclotomic level r (default {default_settings['r']})")
    common.add_argument("--lift", choices=[lift.value for lift in Lift], help="Frobenius lift")
    common.add_argument("--chi", type=int, help="value of the cyclotomic character")
    common.add_argument("--seed", type=int, default=default_settings["seed"], help="seed for randomized cases")
    common.add_argument("--cases", type=int, default=default_settings["cases"], help="randomized cases per suite")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", type=Path, help="also write the JSON report to this file")
    common.add_argument("--log-json", action="store_true", help="render log events as JSON")
    common.add_argument("-v", "--verbose", action="store_true", help="show library debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="cyclowin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    zoo = commands.add_parser("zoo", help="canonical objects with Γ-action").add_subparsers(dest="verb", required=True)
    zoo.add_parser("list", parents=[common], help="list the catalogue")
    zoo_build = zoo.add_parser("build", parents=[common], help="build and serialize one object")
    zoo_build.add_argument("name", choices=zoo_names())

    frame = commands.add_parser("frame", help="frame axioms").add_subparsers(dest="verb", required=True)
    frame_check_parser = frame.add_parser("check", parents=[common])
    frame_check_parser.add_argument("--kind", choices=sorted(FRAMES), default="sigma")

    window = commands.add_parser("window", help="windows").add_subparsers(dest="verb", required=True)
    for verb in ("check", "dual"):
        sub = window.add_parser(verb, parents=[common])
        sub.add_argument("--object", choices=zoo_names(), default="tate", help="zoo object to use")
        sub.add_argument("--kind", choices=("sigma", "script"), default="sigma", help="window over 𝔖 or over S")
        sub.add_argument("--random", type=int, metavar="RANK", help="use a random window of this rank instead")

    bt = commands.add_parser("bt", help="BT modules").add_subparsers(dest="verb", required=True)
    for verb in ("check", "dual"):
        sub = bt.add_parser(verb, parents=[common])
        sub.add_argument("--object", choices=zoo_names(), default="tate", help="zoo object to use")
        sub.add_argument("--random", type=int, metavar="RANK", help="use a random module of this rank instead")

    gamma = commands.add_parser("gamma", help="Γ-calculus").add_subparsers(dest="verb", required=True)
    gamma.add_parser("lambda", parents=[common], help="the unit λ_γ")
    for verb in ("nm", "strict"):
        sub = gamma.add_parser(verb, parents=[common])
        sub.add_argument("--object", choices=zoo_names(), default="tate", help="zoo object to use")
        if verb == "strict":
            sub.add_argument("--s", type=int, default=0, help="test strictness on Γ_s")

    wach = commands.add_parser("wach", help="rank-one Kisin-Ren and Wach lattices")
    wach_verbs = wach.add_subparsers(dest="verb", required=True)
    for verb in ("kr-to-wach", "wach-to-kr"):
        sub = wach_verbs.add_parser(verb, parents=[common])
        sub.add_argument("--alpha", required=True, help='φ(e) = α e as a monomial, e.g. "2*E1^2"')
        sub.add_argument("--r", type=int, dest="wach_r", help="level of the translation (default --level)")

    suite = commands.add_parser("suite", parents=[common], help="run property suites")
    suite.add_argument("name", nargs="?", default="all", choices=sorted(SUITES) + ["all"])
    suite.add_argument("--list", action="store_true", help="list the suites and exit")
    return parser


def context_from_args(args: argparse.Namespace) -> PrecisionCtx:
    return PrecisionCtx.from_settings(p=args.p, N=args.N, M=args.M, r=args.r, lift=args.lift)


def _series_text(x: TruncatedSeries) -> str:
    terms = []
    for k, c in enumerate(x.coefficients()):
        if not c:
            continue
        value = str(c) if c.denominator == 1 else f"({c})"
        if k == 0:
            terms.append(value)
        else:
            power = "u" if k == 1 else f"u^{k}"
            terms.append(power if c == 1 else f"{value}*{power}")
    return " + ".join(terms) or "0"


def _check_lines(check: CheckModel) -> list[str]:
    status = "PASS" if check.passed else "FAIL"
    return [f"{status} {check.name} ({check.checked} checks)"] + [f"  - {failure}" for failure in check.failures]


def run_zoo(args, ctx: PrecisionCtx) -> Outcome:
    if args.verb == "list":
        names = list(zoo_names())
        return Outcome({"zoo": names}, lines=names)
    obj = build(args.name, ctx)
    model = ZooModel.of(obj)
    return Outcome(model, lines=[f"{obj.name}: types {model.window.types}, chis {list(obj.chis)}"])


def run_frame(args, ctx: PrecisionCtx) -> Outcome:
    frame = FRAMES[args.kind](ctx)
    check = CheckModel.of(frame_check(frame, random.Random(args.seed), strict=False))
    return Outcome({"frame": FrameModel.of(frame), "check": check}, check.passed, _check_lines(check))


def _window(args, ctx: PrecisionCtx):
    if args.random is not None:
        frame = FRAMES[args.kind](ctx)
        return random_window(frame, random.Random(args.seed), args.random)
    obj = build(args.object, ctx)
    return obj.script if args.kind == "script" else obj.window


def run_window(args, ctx: PrecisionCtx) -> Outcome:
    W = _window(args, ctx)
    if args.verb == "dual":
        dualized = dual(W)
        model = {"window": WindowModel.of(W), "dual": WindowModel.of(dualized)}
        return Outcome(model, lines=[f"types {WindowModel.of(W).types} -> {WindowModel.of(dualized).types}"])
    check = CheckModel.of(window_check(W, random.Random(args.seed), strict=False))
    return Outcome({"window": WindowModel.of(W), "check": check}, check.passed, _check_lines(check))


def run_bt(args, ctx: PrecisionCtx) -> Outcome:
    if args.random is not None:
        module = random_bt_module(sigma_frame(ctx), random.Random(args.seed), args.random)
    else:
        module = build(args.object, ctx).bt
    if args.verb == "dual":
        return Outcome({"bt": BTModel.of(module), "dual": BTModel.of(bt_dual(module))}, lines=[f"rank {module.n}"])
    report = bt_check(module, strict=False).merge(bt_roundtrip(module).check(strict=False))
    check = CheckModel.of(report)
    return Outcome({"bt": BTModel.of(module), "check": check}, check.passed, _check_lines(check))


def run_gamma(args, ctx: PrecisionCtx) -> Outcome:
    if args.verb == "lambda":
        chi = args.chi if args.chi is not None else 1 + ctx.p
        value = lambda_gamma(ctx, chi).value
        model = {"context": ContextModel.of(ctx), "chi": chi, "lambda": SeriesModel.of(value)}
        return Outcome(model, lines=[f"lambda_gamma(chi={chi}) = {_series_text(value)}"])
    obj = build(args.object, ctx)
    if args.verb == "strict":
        strict = strictness_check(obj.action, args.s)
        lines = [f"{obj.name}: Gamma_{args.s} acts {'trivially' if strict else 'non-trivially'} mod u"]
        return Outcome({"object": obj.name, "s": args.s, "strict": strict}, strict, lines)
    op = n_operator(obj.script_action, args.chi)
    check = CheckModel.of(nm_check(op, random.Random(args.seed)))
    model = {
        "object": obj.name,
        "chi": op.chi,
        "terms": op.terms,
        "guard": op.guard,
        "matrix": matrix_json(op.matrix),
        "check": check,
    }
    return Outcome(model, check.passed, [f"N_M via chi={op.chi}: {op.terms} log terms"] + _check_lines(check))


def run_wach(args, ctx: PrecisionCtx) -> Outcome:
    r = args.wach_r if args.wach_r is not None else ctx.r
    alpha = parse_alpha(args.alpha, r, p=ctx.p)
    if args.verb == "kr-to-wach":
        source = kr_lattice(alpha, r)
        result = wach_from_kr(source, r)
        model = TranslationModel.of(args.verb, r, alpha, source, result, is_kisin_ren(source, r))
        return Outcome(model, lines=[f"M_KR = {source}", f"N    = {result}"])
    source = MonomialLattice.free(alpha)
    translation = kr_from_wach(source, r)
    kisin_ren = is_kisin_ren(translation.lattice, r)
    model = TranslationModel.of(args.verb, r, alpha, source, translation.lattice, kisin_ren, translation)
    lines = [f"N    = {source}", f"M_KR = {translation.lattice}", f"stable after {translation.stable_after}"]
    return Outcome(model, kisin_ren, lines)


def run_suite_command(args, ctx: PrecisionCtx) -> Outcome:
    if args.list:
        listing = {name: entry.summary for name, entry in SUITES.items()}
        return Outcome({"suites": listing}, lines=[f"{name:22} {summary}" for name, summary in listing.items()])
    sc = SuiteContext(ctx, args.seed, args.cases)
    results = run_suites("all" if args.name == "all" else [args.name], sc)
    suites, lines = [], []
    for result in results:
        cases = [CheckModel.of(report) for report in result.reports]
        failures = sum(len(case.failures) for case in cases)
        logger.info("suite.finished", suite=result.suite.name, passed=result.passed, failures=failures)
        entry = result.suite
        suites.append(SuiteModel(suite=entry.name, summary=entry.summary, passed=result.passed, cases=cases))
        lines.append(f"{'PASS' if result.passed else 'FAIL'} {result.suite.name}")
        lines.extend("  " + line for case in cases for line in _check_lines(case) if not case.passed)
    passed = all(result.passed for result in results)
    model = RunModel(context=ContextModel.of(ctx), seed=args.seed, passed=passed, suites=suites)
    return Outcome(model, passed, lines)


HANDLERS = {
    "zoo": run_zoo,
    "frame": run_frame,
    "window": run_window,
    "bt": run_bt,
    "gamma": run_gamma,
    "wach": run_wach,
    "suite": run_suite_command,
}


def emit(outcome: Outcome, args) -> None:
    text = dumps(outcome.payload)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    if args.json:
        sys.stdout.write(text)
    else:
        for line in outcome.lines:
            print(line)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    configure_logging(args.log_json, args.verbose)
    log = logger.bind(command=args.command, verb=getattr(args, "verb", None))
    try:
        ctx = context_from_args(args)
        outcome = HANDLERS[args.command](args, ctx)
    except ValidationError as exc:
        log.error("invalid.settings", errors=exc.error_count(), detail=str(exc).splitlines()[0])
        return 2
    except CyclowinError as exc:
        log.error("operation.failed", error=type(exc).__name__, detail=str(exc))
        return 1
    except ValueError as exc:
        log.error("invalid.argument", detail=str(exc))
        return 2
    emit(outcome, args)
    return 0 if outcome.passed else 1


if __name__ == "__main__":
    sys.exit(main())
