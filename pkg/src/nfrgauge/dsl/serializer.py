"""Canonical text rendering of a :class:`RequirementSpec`."""
from __future__ import annotations

import math
import re

from ..fuzzy import CrispInterval, Trapezoidal, Triangular
from ..likert import standard_scale
from .lexer import KEYWORDS
from .model import (
    BooleanCheck,
    FuzzyAssessment,
    LikertSurvey,
    MetricThreshold,
    RequirementSpec,
    TemplateAssessment,
)

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INDENT = "  "


def format_number(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def quote(s: str) -> str:
    body = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


def name_or_string(s: str) -> str:
    if _IDENT.match(s) and s not in KEYWORDS and s != "inf":
        return s
    return quote(s)


def format_shape(mf) -> str:
    if isinstance(mf, Triangular):
        args = (mf.a, mf.b, mf.c)
        return "triangle(" + ", ".join(format_number(v) for v in args) + ")"
    if isinstance(mf, Trapezoidal):
        args = (mf.a, mf.b, mf.c, mf.d)
        return "trapezoid(" + ", ".join(format_number(v) for v in args) + ")"
    if isinstance(mf, CrispInterval):
        left = "[" if mf.lo_inclusive else "("
        right = "]" if mf.hi_inclusive else ")"
        return f"interval{left}{format_number(mf.lo)}, {format_number(mf.hi)}{right}"
    raise TypeError(f"unknown membership function {mf!r}")


def _requirement_fields(req):
    fields = []
    if req.statement:
        fields.append(("statement", quote(req.statement)))
    v = req.verification
    if isinstance(v, BooleanCheck):
        fields.append(("verified_by", quote(v.test)))
    elif isinstance(v, MetricThreshold):
        text = f"{v.comparator} {format_number(v.bound)}"
        if v.unit:
            text += f" {v.unit}"
        fields += [("metric", v.metric), ("threshold", quote(text))]
        if v.aggregator:
            fields.append(("aggregator", v.aggregator))
    elif isinstance(v, LikertSurvey):
        fields += [("scale", v.scale), ("survey", quote(v.survey))]
        if v.band is not None:
            fields.append(("band", format_number(v.band)))
    elif isinstance(v, FuzzyAssessment):
        target = v.target + (f": {v.hedge.value}" if v.hedge else "")
        fields += [("variable", v.variable), ("input", v.input), ("target", target)]
        if v.aggregator:
            fields.append(("aggregator", v.aggregator))
    elif isinstance(v, TemplateAssessment):
        fields.append(("template", v.template))
        if v.aggregator:
            fields.append(("aggregator", v.aggregator))
    return fields


def serialize(spec: RequirementSpec) -> str:
    """Deterministic source text; ``parse(serialize(spec))`` rebuilds ``spec``."""
    out = []

    def emit(depth: int, text: str) -> None:
        out.append(_INDENT * depth + text)

    for req in spec.requirements:
        fields = _requirement_fields(req)
        head = f"{req.declared} {quote(req.id)}"
        if not fields:
            emit(1, head + " {}")
            continue
        emit(1, head + " {")
        for key, val in fields:
            emit(2, f"{key}: {val};")
        emit(1, "}")

    for lv in spec.variables:
        head = f"linguistic {lv.name} over {name_or_string(lv.unit)}"
        if lv.domain is not None:
            head += f" domain({format_number(lv.domain[0])}, {format_number(lv.domain[1])})"
        emit(1, head + " {")
        for name, mf in lv.terms:
            emit(2, f"term {name}: {format_shape(mf)};")
        emit(1, "}")

    for sc in spec.scales:
        points = len(sc.categories)
        if 5 <= points <= 7 and standard_scale(points, sc.name) == sc:
            emit(1, f"scale {sc.name} standard {points};")
            continue
        emit(1, f"scale {sc.name} {{")
        for label, value in sc.categories:
            emit(2, f"option {quote(label)} {value};")
        emit(1, "}")

    for tpl in spec.templates:
        emit(1, f"template {tpl.name} {{")
        for sub in tpl.subs:
            head = f"sub {sub.name} weight {format_number(sub.weight)}"
            if sub.value_range is not None:
                head += f" range({format_number(sub.value_range[0])}, {format_number(sub.value_range[1])})"
            emit(2, head + " {")
            for lvl in sub.levels:
                emit(3, f"level {lvl.name}: {format_shape(lvl.shape)};")
            emit(2, "}")
        for row in tpl.rows:
            emit(2, f"status {name_or_string(row.name)}: {', '.join(row.levels)};")
        emit(1, "}")

    for goal in spec.softgoals:
        head = f"softgoal {goal.id}"
        if goal.threshold is not None:
            head += f" threshold {format_number(goal.threshold)}"
        if not goal.children:
            emit(1, head + " {}")
            continue
        emit(1, head + " {")
        for c in goal.children:
            ref = c.ref if c.kind == "subgoal" else quote(c.ref)
            emit(2, f"weight {format_number(c.weight)} {c.kind} {ref};")
        emit(1, "}")

    for lk in spec.links:
        emit(1, f"link {lk.source} -> {lk.target} sign {format_number(lk.sign)};")

    if not out:
        return f"project {quote(spec.project)} {{}}\n"
    return f"project {quote(spec.project)} {{\n" + "\n".join(out) + "\n}\n"
