import shutil

import pytest

from nfrgauge.dsl import parse
from nfrgauge.dsl.model import BooleanCheck, MetricThreshold, Requirement, RequirementSpec
from nfrgauge.errors import DataError
from nfrgauge.evaluator import (
    EvaluationData,
    Kind,
    Satisfaction,
    Unevaluated,
    classify,
    evaluate_loaded,
    evaluate_mnfr,
    evaluate_project,
    evaluate_snfr,
)
from nfrgauge.ingest import MeasurementSeries, ResponseSet
from nfrgauge.likert import SurveyKey
from nfrgauge.report import to_dict, to_json, to_text


def spec_of(body):
    result = parse('project "t" {\n' + body + "\n}\n")
    assert result.ok, [d.format() for d in result.diagnostics]
    return result.spec


def mnfr(cmp, bound, aggregator=None):
    return Requirement("rt", "mnfr", "", MetricThreshold("response_time_s", cmp, bound, "s", aggregator))


def series(*samples):
    return MeasurementSeries("response_time_s", "s", samples)


def test_classification():
    assert classify(mnfr("<", 1.0)).kind is Kind.MNFR
    assert classify(Requirement("a", "requirement", "", BooleanCheck("test-42"))).kind is Kind.FR
    vague = classify(Requirement("v", "requirement", "response time should be fast"))
    assert vague.kind is Kind.VAGUE
    assert vague.rationale.endswith('"response time should be fast" is a vague NFR')


def test_snfr_kinds(project_text):
    spec = parse(project_text).spec
    kinds = {r.id: classify(r).kind for r in spec.requirements}
    assert kinds == {
        "login": Kind.FR, "fast_ui": Kind.VAGUE, "response_time": Kind.MNFR,
        "usability": Kind.SNFR, "throughput": Kind.SNFR, "reliability": Kind.SNFR,
    }


@pytest.mark.parametrize("cmp,bound,samples,agg,passed,margin", [
    ("<", 1.0, (0.42, 0.8, 0.61), None, True, 0.2),
    ("<", 1.0, (0.5, 1.0), None, False, 0.0),
    ("<=", 1.0, (0.5, 1.0), None, True, 0.0),
    (">=", 0.8, (0.8, 0.9), "min", True, 0.0),
    (">", 0.8, (0.8, 0.9), "min", False, 0.0),
    (">", 0.5, (0.6, 1.0), "mean", True, 0.3),
])
def test_mnfr_comparators(cmp, bound, samples, agg, passed, margin):
    out = evaluate_mnfr(mnfr(cmp, bound, agg), series(*samples))
    assert out.passed is passed
    assert out.margin == pytest.approx(margin, abs=1e-12)


def test_mnfr_default_aggregator_override():
    req = mnfr("<", 0.7)
    assert not evaluate_mnfr(req, series(0.5, 0.9)).passed
    assert evaluate_mnfr(req, series(0.5, 0.9), "min").passed
    assert evaluate_mnfr(mnfr("<", 0.7, "max"), series(0.5, 0.9), "min").aggregator == "max"


def test_mnfr_missing_or_mismatched_series():
    with pytest.raises(DataError, match="response_time_s"):
        evaluate_mnfr(mnfr("<", 1.0), None)
    with pytest.raises(DataError):
        evaluate_mnfr(mnfr("<", 1.0), MeasurementSeries("other", "", [1]))


FUZZY = """
linguistic speed over tps domain(0, 100) {
  term slow: trapezoid(0, 0, 10, 20);
  term average: triangle(15, 30, 45);
  term fast: trapezoid(40, 60, inf, inf);
}
snfr "s" { variable: speed; input: tps; target: fast: not; }
"""


def test_fuzzy_assessment():
    spec = spec_of(FUZZY)
    data = EvaluationData(measurements={"tps": MeasurementSeries("tps", "tps", [17.5])})
    sat = evaluate_snfr(spec.requirements[0], spec, data)
    assert sat.degree == 1.0
    assert sat.label == "slow"


def test_template_assessment(reliability_text):
    spec = parse(reliability_text).spec
    data = EvaluationData(measurements={
        "frequency_of_failure": MeasurementSeries("frequency_of_failure", "", [0.05]),
        "recoverability": MeasurementSeries("recoverability", "", [0.9]),
    })
    assert evaluate_snfr(spec.requirements[0], spec, data) == Satisfaction(
        1.0, "High Reliable", "frequency_of_failure=Low, recoverability=High; raw 10/10")


def test_survey_degree_and_label():
    spec = spec_of('scale s standard 7;\nsnfr "u" { scale: s; survey: "u"; }')
    key = SurveyKey.all_favorable([f"q{i}" for i in range(30)])
    rows = {"r1": {f"q{i}": "Strongly Agree" for i in range(30)},
            "r2": {f"q{i}": "Strongly Disagree" for i in range(30)}}
    data = EvaluationData(surveys={"u": (key, ResponseSet("s", rows))})
    extras = {}
    sat = evaluate_snfr(spec.requirements[0], spec, data, extras=extras)
    assert sat.degree == 0.5
    assert sat.label == "Undecided"
    assert extras["u"].stats.mean == 120


def test_unbound_survey_is_partial():
    spec = spec_of(
        'scale s standard 5;\nsnfr "u" { scale: s; survey: "missing"; }\n'
        'mnfr "rt" { metric: response_time_s; threshold: "< 1"; }'
    )
    data = EvaluationData(measurements={"response_time_s": series(0.3)})
    report = evaluate_loaded(spec, data)
    u, rt = report.results
    assert isinstance(u.outcome, Unevaluated) and "missing" in u.outcome.reason
    assert rt.outcome.passed
    assert report.has_failures


def test_empty_project(tmp_path):
    report = evaluate_project(RequirementSpec("empty"), tmp_path)
    assert report.results == () and not report.has_failures
    assert to_dict(report)["summary"]["requirements"] == 0


def test_missing_data_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        evaluate_project(RequirementSpec("x"), tmp_path / "nope")


def test_fixture_project(project_text, fixtures_dir):
    report = evaluate_project(parse(project_text).spec, fixtures_dir / "data")
    by_id = {r.id: r for r in report.results}
    assert by_id["response_time"].outcome.margin == pytest.approx(0.2)
    assert by_id["usability"].outcome.label == "Favorable"
    assert by_id["usability"].outcome.degree == pytest.approx((74 / 3 - 4) / 24)
    assert by_id["throughput"].outcome.degree == 1.0
    assert by_id["reliability"].outcome.label == "High Reliable"
    assert isinstance(by_id["fast_ui"].outcome, Unevaluated)
    roots = {v.id: v for v in report.roots}
    assert set(roots) == {"reliability_goal", "performance", "quality"}
    assert roots["reliability_goal"].value == 1.0
    assert roots["quality"].value == pytest.approx((3 * (74 / 3 - 4) / 24 + 1) / 4)
    assert all(v.satisfied for v in report.roots)
    assert [(c.source, c.helps, c.hurts) for c in report.conflicts] == [
        ("throughput", "performance", "reliability_goal")]
    assert not report.has_failures
    assert "result: OK" in to_text(report)


def test_failing_check_fails_report(project_text, fixtures_dir, tmp_path):
    data = tmp_path / "data"
    shutil.copytree(fixtures_dir / "data", data)
    (data / "checks.csv").write_text("test_id,result\ntest_login,fail\n")
    report = evaluate_project(parse(project_text).spec, data)
    assert report.counts()["failed"] == 1
    assert report.has_failures
    assert to_json(report) == to_json(evaluate_project(parse(project_text).spec, data))
