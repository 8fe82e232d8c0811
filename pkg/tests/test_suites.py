"""Tests for `cyclowin.suites`."""

import pytest

from cyclowin.checks import CheckReport
from cyclowin.exceptions import AxiomViolation
from cyclowin.padic_rings import PrecisionCtx
from cyclowin.suites import SUITES, SuiteContext, run_suite, run_suites, suite_names

SUITE_CTX = PrecisionCtx(p=3, N=3, M=8, r=1)


def test_registry():
    assert suite_names() == (
        "ring-action",
        "t-element",
        "frame-window-axioms",
        "duality",
        "win-bt",
        "lift-torsor",
        "lambda-gamma",
        "le-strictm",
        "le-winsnm",
        "connection",
        "wach-kr",
    )
    assert all(SUITES[name].summary for name in suite_names())


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("no-such-suite", SuiteContext(SUITE_CTX))


def test_seeded_randomness_is_per_suite():
    sc = SuiteContext(SUITE_CTX, seed=3, cases=5)
    assert sc.rng("duality").random() == SuiteContext(SUITE_CTX, seed=3).rng("duality").random()
    assert sc.rng("duality").random() != sc.rng("win-bt").random()
    assert sc.count(100) == 5 and sc.count(2) == 2


def test_check_report():
    report = CheckReport("sample")
    assert report.expect(True, "never")
    assert not report.expect(False, "always")
    other = CheckReport("inner", ["broken"], checked=2)
    report.merge(other)
    assert report.checked == 4
    assert report.failures == ["always", "inner: broken"]
    assert report.to_json() == {"name": "sample", "passed": False, "checked": 4, "failures": report.failures}
    with pytest.raises(AxiomViolation):
        report.raise_for_failures()


@pytest.mark.parametrize("name", ["wach-kr", "lambda-gamma", "lift-torsor", "ring-action"])
def test_quick_suites_pass(name):
    result = run_suite(name, SuiteContext(SUITE_CTX, cases=3))
    assert result.passed, [failure for report in result.reports for failure in report.failures]


@pytest.mark.slow
def test_all_suites_pass_at_small_precision():
    results = run_suites("all", SuiteContext(SUITE_CTX, cases=2))
    assert [result.suite.name for result in results] == list(suite_names())
    failures = {result.suite.name: [f for r in result.reports for f in r.failures] for result in results}
    assert all(result.passed for result in results), failures
