import orjson
import pytest

from app.core.exceptions import ConfigurationError
from app.schemas.report import CheckResult, Report, SuiteConfig, Verdict
from app.services import harness_service


def config(suite, ring="Fp:7", samples=2, seed=0, **extra):
    return SuiteConfig(suite=suite, ring=ring, samples=samples, seed=seed, **extra)


# ---------------------------------------------------------
# Every suite passes on the built-in structures
# ---------------------------------------------------------

@pytest.mark.parametrize("suite", ["zorn", "para", "companions", "octonionify"])
def test_composition_suites_pass(suite):
    report = harness_service.run_suite(config(suite))
    assert report.verdict is Verdict.PASS, report.to_json()
    assert report.exit_code == 0


@pytest.mark.parametrize("suite", ["jordan", "cns", "iota", "isotope", "frames", "deform"])
def test_albert_suites_pass(suite, h3_f7):
    report = harness_service.run_suite(config(suite), algebra=h3_f7)
    assert report.verdict is Verdict.PASS, report.to_json()


def test_zorn_suite_enumerates_f2():
    report = harness_service.run_suite(config("zorn", ring="Fp:2", samples=3))
    assert report.verdict is Verdict.PASS
    exhaustive = report.check("exhaustive_multiplicativity")
    assert not exhaustive.skipped and exhaustive.passed == 1


def test_zorn_suite_skips_enumeration_over_f7():
    report = harness_service.run_suite(config("zorn"))
    assert report.check("exhaustive_multiplicativity").verdict is Verdict.SKIP
    assert report.verdict is Verdict.PASS


def test_builds_its_own_albert_algebra():
    report = harness_service.run_suite(config("cns", samples=1))
    assert report.verdict is Verdict.PASS
    assert report.check("u_consistency").passed == 1


def test_scaled_gamma():
    report = harness_service.run_suite(config("companions", gamma="2,3,5"))
    assert report.verdict is Verdict.PASS


@pytest.mark.parametrize("suite", ["jordan", "deform"])
def test_albert_suites_with_scaled_gamma(suite):
    report = harness_service.run_suite(config(suite, samples=1, gamma="1,2,3"))
    assert report.verdict is Verdict.PASS, report.to_json()


# ---------------------------------------------------------
# Determinism
# ---------------------------------------------------------

def test_reports_are_reproducible():
    first = harness_service.run_suite(config("para", samples=4, seed=17))
    second = harness_service.run_suite(config("para", samples=4, seed=17))
    assert first.to_json(include_time=False) == second.to_json(include_time=False)
    data = orjson.loads(first.to_json())
    assert list(data) == sorted(data)
    assert data["verdict"] == "pass"
    assert "wall_time" not in orjson.loads(first.to_json(include_time=False))


def test_streams_depend_on_suite_label_and_index():
    ctx = harness_service.SuiteContext(config("zorn"))
    a = ctx.stream("pairs", 0).next_u64()
    assert a == ctx.stream("pairs", 0).next_u64()
    assert a != ctx.stream("pairs", 1).next_u64()
    assert a != ctx.stream("other", 0).next_u64()


# ---------------------------------------------------------
# Negative controls
# ---------------------------------------------------------

@pytest.mark.parametrize("suite", sorted(harness_service.SUITES))
def test_mutations_are_detected(suite):
    report = harness_service.mutate_and_expect_failure(config(suite, samples=1))
    assert report.suite == f"{suite}-mutation"
    assert report.check("mutation_detected").passed == 1
    assert report.verdict is Verdict.PASS
    assert any(note.startswith("mutation:") for note in report.notes)


# the check of each suite that must see the perturbed structure
OWN_CHECKS = {
    "zorn": "multiplicativity",
    "para": "multiplicativity",
    "companions": "composition",
    "jordan": "u_one_identity",
    "cns": "basepoint",
    "iota": "composition",
    "isotope": "basepoint",
    "frames": "distinguished_frame",
    "deform": "distinguished_deformation",
    "octonionify": "composition",
}


@pytest.mark.parametrize("suite", sorted(OWN_CHECKS))
def test_mutation_fails_the_suites_own_check(suite):
    report = harness_service.run_suite(config(suite, samples=1, mutate=True))
    assert report.check(OWN_CHECKS[suite]).verdict is Verdict.FAIL, report.to_json()


def test_every_suite_has_an_own_check():
    assert set(OWN_CHECKS) == set(harness_service.SUITES)


def test_mutated_suite_itself_fails():
    report = harness_service.run_suite(config("cns", samples=1, mutate=True))
    assert report.verdict is Verdict.FAIL
    assert report.exit_code == 1
    basepoint = report.check("basepoint")
    assert basepoint.first_failure_index == 0
    assert basepoint.counterexample["identity"] == "1^# = 1"


# ---------------------------------------------------------
# Configuration errors and verdicts
# ---------------------------------------------------------

def test_unknown_suite():
    with pytest.raises(ConfigurationError):
        harness_service.run_suite(config("triality"))


def test_non_unit_gamma():
    with pytest.raises(ConfigurationError):
        harness_service.run_suite(config("cns", gamma="1,0,1"))


def test_algebra_ring_must_match(h3_f7):
    with pytest.raises(ConfigurationError):
        harness_service.run_suite(config("cns", ring="Q"), algebra=h3_f7)


def test_skip_only_report_exits_three():
    report = Report(suite="demo")
    report.add(CheckResult(name="a").skip("not applicable"))
    assert report.verdict is Verdict.SKIP
    assert report.exit_code == 3
    report.add(CheckResult(name="b")).record(True)
    assert report.exit_code == 0


def test_first_failure_keeps_lowest_index():
    result = CheckResult(name="sampled")
    result.record(False, {"at": 7}, 7)
    result.record(False, {"at": 3}, 3)
    result.record(True, None, 4)
    assert result.first_failure_index == 3
    assert result.counterexample == {"at": 3}
