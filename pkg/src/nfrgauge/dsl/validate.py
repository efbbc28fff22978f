"""Semantic checks on a parsed spec: template coverage, forest shape, unused declarations."""
from __future__ import annotations

import re
from typing import List

from ..errors import GoalGraphError
from ..goals import validate_forest
from .model import FuzzyAssessment, LikertSurvey, RequirementSpec, TemplateAssessment
from .parser import Diagnostic


def _position(spec: RequirementSpec, *key):
    return spec.positions.get(tuple(key), (1, 1))


def validate(spec: RequirementSpec, text: str = "") -> List[Diagnostic]:
    """Errors for broken invariants and warnings for unreferenced declarations.

    ``text`` is the source the spec was parsed from; when given, diagnostics
    carry the offending source line.
    """
    lines = text.split("\n") if text else []
    diags: List[Diagnostic] = []

    def add(severity, pos, message):
        line, col = pos
        snippet = lines[line - 1].rstrip("\r") if 0 < line <= len(lines) else ""
        diags.append(Diagnostic(severity, line, col, message, snippet))

    for tpl in spec.templates:
        for problem in tpl.problems():
            add("error", _position(spec, "template", tpl.name), f"template {tpl.name}: {problem}")

    try:
        forest = validate_forest(spec.goal_nodes())
    except GoalGraphError as exc:
        words = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", str(exc)))
        culprit = next((g.id for g in spec.softgoals if g.id in words), None)
        add("error", _position(spec, "soft goal", culprit), str(exc))
        forest = None
    if forest is not None:
        roots = set(forest.roots)
        for g in spec.softgoals:
            if g.threshold is not None and g.id not in roots:
                add("warning", _position(spec, "soft goal", g.id),
                    f"threshold on soft goal {g.id} is ignored because it is not a root")
            if not g.children:
                add("warning", _position(spec, "soft goal", g.id), f"soft goal {g.id} has no children")

    used_scales, used_vars, used_templates = set(), set(), set()
    for r in spec.requirements:
        v = r.verification
        if isinstance(v, LikertSurvey):
            used_scales.add(v.scale)
        elif isinstance(v, FuzzyAssessment):
            used_vars.add(v.variable)
        elif isinstance(v, TemplateAssessment):
            used_templates.add(v.template)
        elif v is None:
            add("warning", _position(spec, "requirement", r.id),
                f"requirement {r.id} has no verification clause and will be reported as vague")
    for sc in spec.scales:
        if sc.name not in used_scales:
            add("warning", _position(spec, "scale", sc.name), f"scale {sc.name} is never used")
    for lv in spec.variables:
        if lv.name not in used_vars:
            add("warning", _position(spec, "linguistic variable", lv.name),
                f"linguistic variable {lv.name} is never used")
    for tpl in spec.templates:
        if tpl.name not in used_templates:
            add("warning", _position(spec, "template", tpl.name), f"template {tpl.name} is never used")

    seen = set()
    for i, lk in enumerate(spec.links):
        key = (lk.source, lk.target)
        if key in seen:
            add("warning", _position(spec, "link", i), f"link {lk.source} -> {lk.target} is declared twice")
        seen.add(key)

    diags.sort(key=lambda d: (d.line, d.column))
    return diags
