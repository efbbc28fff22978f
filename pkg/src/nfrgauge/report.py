"""JSON and plain-text rendering of evaluation reports.

JSON keys are emitted in a fixed order and reals are rounded to 12
significant digits, so identical inputs give byte-identical output.
"""
from __future__ import annotations

import json
import math
from typing import List, Optional

from .evaluator import (
    CheckOutcome,
    EvaluationReport,
    Kind,
    RequirementResult,
    Satisfaction,
    Unevaluated,
)


def _num(x: Optional[float]):
    if x is None:
        return None
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _outcome_dict(r: RequirementResult) -> dict:
    o = r.outcome
    if isinstance(o, CheckOutcome):
        d = {"status": "pass" if o.passed else "fail"}
        if o.aggregator is not None:
            d.update(aggregator=o.aggregator, aggregate=_num(o.aggregate), margin=_num(o.margin))
        return d
    if isinstance(o, Satisfaction):
        return {"status": "scored", "degree": _num(o.degree), "label": o.label, "detail": o.detail}
    status = "vague" if r.classification.kind is Kind.VAGUE else "unevaluated"
    return {"status": status, "reason": o.reason}


def to_dict(report: EvaluationReport) -> dict:
    return {
        "project": report.project,
        "summary": report.counts(),
        "requirements": [
            {
                "id": r.id,
                "kind": r.classification.kind.value,
                "rationale": r.classification.rationale,
                "statement": r.statement,
                "outcome": _outcome_dict(r),
            }
            for r in report.results
        ],
        "goals": {
            "nodes": [{"id": nid, "value": _num(v)} for nid, v in report.goals],
            "roots": [
                {"id": v.id, "value": _num(v.value), "threshold": _num(v.threshold), "satisfied": v.satisfied}
                for v in report.roots
            ],
        },
        "conflicts": [
            {"source": c.source, "helps": c.helps, "hurts": c.hurts, "signs": [_num(s) for s in c.signs]}
            for c in report.conflicts
        ],
        "surveys": {
            rid: {
                "count": s.stats.count,
                "mean": _num(s.stats.mean),
                "median": s.stats.median,
                "min": s.stats.min,
                "max": s.stats.max,
                "min_possible": s.stats.min_possible,
                "max_possible": s.stats.max_possible,
                "histogram": [[score, n] for score, n in s.stats.histogram],
                "decision": s.decision.attitude.value,
                "neutral": _num(s.decision.neutral),
                "band": _num(s.decision.band),
                "margin": _num(s.decision.margin),
            }
            for rid, s in report.surveys
        },
        "templates": {
            rid: {
                "status": t.status,
                "score": _num(t.score),
                "raw_score": _num(t.raw_score),
                "max_raw": _num(t.max_raw),
                "exact_match": t.exact_match,
                "levels": {sub: lvl for sub, lvl in t.levels},
            }
            for rid, t in report.templates
        },
        "passed": not report.has_failures,
    }


def to_json(report: EvaluationReport) -> str:
    return json.dumps(to_dict(report), indent=2, ensure_ascii=False) + "\n"


def table(headers: List[str], rows: List[List[str]]) -> str:
    """Left-aligned columns separated by two spaces."""
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = []
    for row in [headers, ["-" * w for w in widths]] + rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _outcome_text(r: RequirementResult) -> List[str]:
    o = r.outcome
    if isinstance(o, CheckOutcome):
        detail = ""
        if o.aggregator is not None:
            detail = f"{o.aggregator} {o.aggregate:.4g}, margin {o.margin:+.4g}"
        return ["PASS" if o.passed else "FAIL", detail]
    if isinstance(o, Satisfaction):
        return [f"{o.degree:.4f} {o.label}", o.detail]
    if isinstance(o, Unevaluated):
        return ["VAGUE" if r.classification.kind is Kind.VAGUE else "UNEVALUATED", o.reason]
    return ["?", ""]


def to_text(report: EvaluationReport) -> str:
    out = [f"project: {report.project}", ""]
    rows = [[r.id, r.classification.kind.value] + _outcome_text(r) for r in report.results]
    out.append(table(["REQUIREMENT", "KIND", "OUTCOME", "DETAIL"], rows))
    if report.roots:
        out += ["", table(
            ["ROOT GOAL", "VALUE", "THRESHOLD", "VERDICT"],
            [[v.id, "n/a" if v.value is None else f"{v.value:.4f}", f"{v.threshold:.4g}",
              "satisfied" if v.satisfied else "UNSATISFIED"] for v in report.roots],
        )]
    if report.conflicts:
        out += ["", table(
            ["CONFLICT SOURCE", "HELPS", "HURTS", "SIGNS"],
            [[c.source, c.helps, c.hurts, f"{c.signs[0]:+g}/{c.signs[1]:+g}"] for c in report.conflicts],
        )]
    c = report.counts()
    out += [
        "",
        f"{c['requirements']} requirement(s): {c['fr']} FR, {c['m_nfr']} M-NFR, {c['s_nfr']} S-NFR, "
        f"{c['vague']} vague; {c['passed']} passed, {c['failed']} failed, "
        f"{c['unevaluated']} unevaluated; roots satisfied {c['roots_satisfied']}/{c['roots']}",
        "result: " + ("FAILED" if report.has_failures else "OK"),
    ]
    return "\n".join(out) + "\n"
