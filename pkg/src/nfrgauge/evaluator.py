"""Requirement classification and evaluation against measured and surveyed data.

Data directory layout read by :func:`evaluate_project`:

* ``measurements.csv`` -- ``metric,unit,value`` rows feeding M-NFR thresholds,
  fuzzy assessments and template sub-NFRs (matched by metric name).
* ``checks.csv`` -- ``test_id,result`` rows (pass/fail) for functional checks.
* ``<survey>.key.csv`` and ``<survey>.responses.csv`` for each Likert survey.

Any of these may be absent; requirements whose data is missing are reported
as unevaluated rather than aborting the run.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

from .dsl.model import (
    BooleanCheck,
    FuzzyAssessment,
    LikertSurvey,
    MetricThreshold,
    Requirement,
    RequirementSpec,
    TemplateAssessment,
)
from .errors import DataError, NfrGaugeError
from .fuzzy import TemplateResult, apply_hedge, best_label, evaluate_template, fuzzify, membership
from .goals import Conflict, RootVerdict, detect_conflicts, propagate, roots_satisfied, validate_forest
from .ingest import (
    MeasurementSeries,
    ResponseSet,
    load_checks,
    load_key,
    load_measurements,
    load_responses,
    summarize,
)
from .likert import (
    Decision,
    LikertScale,
    SurveyKey,
    SurveyStats,
    aggregate_scores,
    attitude_decision,
    score_survey,
)

MNFR_DEFAULT_AGGREGATOR = "max"
SNFR_DEFAULT_AGGREGATOR = "mean"


class Kind(str, Enum):
    FR = "FR"
    MNFR = "M-NFR"
    SNFR = "S-NFR"
    VAGUE = "Vague"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    rationale: str


def classify(req: Requirement) -> Classification:
    v = req.verification
    if isinstance(v, BooleanCheck):
        return Classification(Kind.FR, f"verified by check {v.test}")
    if isinstance(v, MetricThreshold):
        unit = f" {v.unit}" if v.unit else ""
        return Classification(Kind.MNFR, f"{v.metric} {v.comparator} {v.bound:g}{unit}")
    if isinstance(v, LikertSurvey):
        return Classification(Kind.SNFR, f"Likert survey {v.survey} on scale {v.scale}")
    if isinstance(v, FuzzyAssessment):
        hedge = f"{v.hedge.value} " if v.hedge else ""
        return Classification(Kind.SNFR, f"{v.input} assessed as {hedge}{v.target} ({v.variable})")
    if isinstance(v, TemplateAssessment):
        return Classification(Kind.SNFR, f"graded by template {v.template}")
    stated = f'"{req.statement}"' if req.statement else f"requirement {req.id}"
    return Classification(Kind.VAGUE, f"no verification clause: {stated} is a vague NFR")


@dataclass(frozen=True)
class CheckOutcome:
    """Pass/fail of an FR or M-NFR; margin > 0 means headroom."""

    passed: bool
    margin: Optional[float] = None
    aggregate: Optional[float] = None
    aggregator: Optional[str] = None


@dataclass(frozen=True)
class Satisfaction:
    degree: float
    label: str
    detail: str = ""


@dataclass(frozen=True)
class Unevaluated:
    reason: str


Outcome = Union[CheckOutcome, Satisfaction, Unevaluated]


@dataclass(frozen=True)
class RequirementResult:
    id: str
    classification: Classification
    outcome: Outcome
    statement: str = ""

    @property
    def leaf_satisfaction(self) -> Optional[float]:
        if isinstance(self.outcome, CheckOutcome):
            return 1.0 if self.outcome.passed else 0.0
        if isinstance(self.outcome, Satisfaction):
            return self.outcome.degree
        return None

    @property
    def failed(self) -> bool:
        return isinstance(self.outcome, CheckOutcome) and not self.outcome.passed


def _compare(value: float, comparator: str, bound: float) -> bool:
    return {
        "<": value < bound,
        "<=": value <= bound,
        ">": value > bound,
        ">=": value >= bound,
    }[comparator]


def evaluate_mnfr(
    req: Requirement, series: Optional[MeasurementSeries], default_aggregator: Optional[str] = None
) -> CheckOutcome:
    v = req.verification
    if not isinstance(v, MetricThreshold):
        raise DataError(f"requirement {req.id} is not a measurable NFR")
    if series is None:
        raise DataError(f"no measurements for metric {v.metric} (requirement {req.id})")
    if series.metric != v.metric:
        raise DataError(f"requirement {req.id} needs metric {v.metric}, got series for {series.metric}")
    agg = v.aggregator or default_aggregator or MNFR_DEFAULT_AGGREGATOR
    value = summarize(series).aggregate(agg)
    margin = v.bound - value if v.comparator in ("<", "<=") else value - v.bound
    return CheckOutcome(_compare(value, v.comparator, v.bound), margin, value, agg)


@dataclass
class EvaluationData:
    """Everything loaded from a data directory, keyed for lookup by requirement."""

    measurements: Dict[str, MeasurementSeries] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    # survey name -> (key, responses), only for surveys whose files exist
    surveys: Dict[str, Tuple[SurveyKey, ResponseSet]] = field(default_factory=dict)

    @classmethod
    def load(cls, data_dir, spec: RequirementSpec) -> "EvaluationData":
        root = Path(data_dir)
        if not root.is_dir():
            raise FileNotFoundError(f"data directory {root} does not exist")
        data = cls()
        if (root / "measurements.csv").is_file():
            data.measurements = {s.metric: s for s in load_measurements(root / "measurements.csv")}
        if (root / "checks.csv").is_file():
            data.checks = load_checks(root / "checks.csv")
        for req in spec.requirements:
            v = req.verification
            if not isinstance(v, LikertSurvey) or v.survey in data.surveys:
                continue
            key_path = root / f"{v.survey}.key.csv"
            resp_path = root / f"{v.survey}.responses.csv"
            if key_path.is_file() and resp_path.is_file():
                scale = spec.scale(v.scale)
                data.surveys[v.survey] = (load_key(key_path), load_responses(resp_path, scale))
        return data


@dataclass(frozen=True)
class SurveyOutcome:
    stats: SurveyStats
    decision: Decision


def _series_value(data: EvaluationData, metric: str, aggregator: str, req_id: str) -> float:
    series = data.measurements.get(metric)
    if series is None:
        raise DataError(f"no measurements for metric {metric} (requirement {req_id})")
    return summarize(series).aggregate(aggregator)


def evaluate_snfr(
    req: Requirement,
    spec: RequirementSpec,
    data: EvaluationData,
    default_band: Optional[float] = None,
    extras: Optional[dict] = None,
) -> Satisfaction:
    """Satisfaction degree and label of a scalable NFR.

    ``extras``, when given, receives the survey statistics or template
    result behind the degree, keyed by requirement id.
    """
    v = req.verification
    if isinstance(v, LikertSurvey):
        if v.survey not in data.surveys:
            raise DataError(f"no data for survey {v.survey} (requirement {req.id})")
        scale: LikertScale = spec.scale(v.scale)
        key, responses = data.surveys[v.survey]
        if not responses.rows:
            raise DataError(f"survey {v.survey} has no responses")
        stats = aggregate_scores(score_survey(scale, key, responses.rows))
        band = v.band if v.band is not None else default_band
        decision = attitude_decision(stats, len(key), scale, band)
        span = stats.max_possible - stats.min_possible
        degree = (stats.mean - stats.min_possible) / span
        if extras is not None:
            extras[req.id] = SurveyOutcome(stats, decision)
        return Satisfaction(min(max(degree, 0.0), 1.0), decision.attitude.value,
                            f"mean {stats.mean:.4g} of [{stats.min_possible}, {stats.max_possible}]")
    if isinstance(v, FuzzyAssessment):
        lv = spec.variable(v.variable)
        agg = v.aggregator or SNFR_DEFAULT_AGGREGATOR
        x = _series_value(data, v.input, agg, req.id)
        degrees = fuzzify(lv, x)
        mu = membership(lv.term(v.target), x)
        if v.hedge is not None:
            mu = apply_hedge(v.hedge, mu)
        label, _ = best_label(degrees, lv.term_names)
        target = f"{v.hedge.value} {v.target}" if v.hedge else v.target
        return Satisfaction(mu, label, f"{v.input} {agg} {x:.4g}; {target} = {mu:.4g}")
    if isinstance(v, TemplateAssessment):
        tpl = spec.template(v.template)
        agg = v.aggregator or SNFR_DEFAULT_AGGREGATOR
        values = {s.name: _series_value(data, s.name, agg, req.id) for s in tpl.subs}
        result: TemplateResult = evaluate_template(tpl, values)
        if extras is not None:
            extras[req.id] = result
        levels = ", ".join(f"{s}={lvl}" for s, lvl in result.levels)
        return Satisfaction(result.score, result.status,
                            f"{levels}; raw {result.raw_score:.4g}/{result.max_raw:g}")
    raise DataError(f"requirement {req.id} is not a scalable NFR")


@dataclass(frozen=True)
class EvaluationReport:
    project: str
    results: Tuple[RequirementResult, ...]
    goals: Tuple[Tuple[str, Optional[float]], ...]
    roots: Tuple[RootVerdict, ...]
    conflicts: Tuple[Conflict, ...]
    surveys: Tuple[Tuple[str, SurveyOutcome], ...] = ()
    templates: Tuple[Tuple[str, TemplateResult], ...] = ()

    def counts(self) -> Dict[str, int]:
        kinds = [r.classification.kind for r in self.results]
        return {
            "requirements": len(self.results),
            "fr": kinds.count(Kind.FR),
            "m_nfr": kinds.count(Kind.MNFR),
            "s_nfr": kinds.count(Kind.SNFR),
            "vague": kinds.count(Kind.VAGUE),
            "passed": sum(isinstance(r.outcome, CheckOutcome) and r.outcome.passed for r in self.results),
            "failed": sum(r.failed for r in self.results),
            "scored": sum(isinstance(r.outcome, Satisfaction) for r in self.results),
            "unevaluated": sum(
                isinstance(r.outcome, Unevaluated) and r.classification.kind is not Kind.VAGUE
                for r in self.results
            ),
            "roots": len(self.roots),
            "roots_satisfied": sum(v.satisfied for v in self.roots),
            "conflicts": len(self.conflicts),
        }

    @property
    def has_failures(self) -> bool:
        """True when a check failed, data was missing, or a root goal is unsatisfied.

        Vague requirements are surfaced in the report but do not count here.
        """
        c = self.counts()
        return bool(c["failed"] or c["unevaluated"] or c["roots_satisfied"] < c["roots"])


def evaluate_requirement(
    req: Requirement,
    spec: RequirementSpec,
    data: EvaluationData,
    default_aggregator: Optional[str] = None,
    default_band: Optional[float] = None,
    extras: Optional[dict] = None,
) -> RequirementResult:
    cls = classify(req)
    try:
        if cls.kind is Kind.VAGUE:
            outcome: Outcome = Unevaluated(cls.rationale)
        elif cls.kind is Kind.FR:
            test = req.verification.test
            if test not in data.checks:
                raise DataError(f"no result for check {test}")
            outcome = CheckOutcome(data.checks[test])
        elif cls.kind is Kind.MNFR:
            series = data.measurements.get(req.verification.metric)
            outcome = evaluate_mnfr(req, series, default_aggregator)
        else:
            outcome = evaluate_snfr(req, spec, data, default_band, extras)
    except NfrGaugeError as exc:
        outcome = Unevaluated(str(exc))
    return RequirementResult(req.id, cls, outcome, req.statement)


def evaluate_project(
    spec: RequirementSpec,
    data_dir,
    default_aggregator: Optional[str] = None,
    default_band: Optional[float] = None,
) -> EvaluationReport:
    """Evaluate every requirement, propagate goal satisfaction and collect conflicts.

    Raises OSError when the data directory is unusable and IngestError when a
    data file is malformed; per-requirement data gaps never abort the run.
    """
    data = EvaluationData.load(data_dir, spec)
    return evaluate_loaded(spec, data, default_aggregator, default_band)


def evaluate_loaded(
    spec: RequirementSpec,
    data: EvaluationData,
    default_aggregator: Optional[str] = None,
    default_band: Optional[float] = None,
) -> EvaluationReport:
    extras: dict = {}
    results = tuple(
        evaluate_requirement(r, spec, data, default_aggregator, default_band, extras)
        for r in spec.requirements
    )
    leaf_sats: Mapping[str, float] = {
        r.id: r.leaf_satisfaction for r in results if r.leaf_satisfaction is not None
    }
    forest = validate_forest(spec.goal_nodes())
    values = propagate(forest, leaf_sats, partial=True)
    verdicts = roots_satisfied(forest, values)
    return EvaluationReport(
        project=spec.project,
        results=results,
        goals=tuple((n.id, values.get(n.id)) for n in forest.nodes),
        roots=tuple(verdicts[r] for r in forest.roots),
        conflicts=tuple(detect_conflicts(spec.links)),
        surveys=tuple((rid, x) for rid, x in extras.items() if isinstance(x, SurveyOutcome)),
        templates=tuple((rid, x) for rid, x in extras.items() if isinstance(x, TemplateResult)),
    )
