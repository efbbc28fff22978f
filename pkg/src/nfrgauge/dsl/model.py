"""Structural model produced by the parser and consumed by the evaluator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from ..fuzzy import Hedge, LinguisticVariable, WeightedTemplate
from ..goals import DEFAULT_THRESHOLD, ContributionLink, SoftGoalNode
from ..likert import LikertScale

COMPARATORS = ("<", "<=", ">", ">=")
AGGREGATORS = ("max", "min", "mean", "p95")


@dataclass(frozen=True)
class BooleanCheck:
    test: str


@dataclass(frozen=True)
class MetricThreshold:
    metric: str
    comparator: str
    bound: float
    unit: str = ""
    aggregator: Optional[str] = None


@dataclass(frozen=True)
class LikertSurvey:
    scale: str
    survey: str
    band: Optional[float] = None


@dataclass(frozen=True)
class FuzzyAssessment:
    variable: str
    input: str
    target: str
    hedge: Optional[Hedge] = None
    aggregator: Optional[str] = None


@dataclass(frozen=True)
class TemplateAssessment:
    template: str
    aggregator: Optional[str] = None


Verification = Union[BooleanCheck, MetricThreshold, LikertSurvey, FuzzyAssessment, TemplateAssessment, None]


@dataclass(frozen=True)
class Requirement:
    id: str
    declared: str  # requirement | mnfr | snfr
    statement: str = ""
    verification: Verification = None


@dataclass(frozen=True)
class GoalChild:
    weight: float
    kind: str  # subgoal | leaf
    ref: str


@dataclass(frozen=True)
class SoftGoalDecl:
    id: str
    threshold: Optional[float] = None
    children: Tuple[GoalChild, ...] = ()


@dataclass(frozen=True)
class RequirementSpec:
    project: str
    requirements: Tuple[Requirement, ...] = ()
    variables: Tuple[LinguisticVariable, ...] = ()
    scales: Tuple[LikertScale, ...] = ()
    templates: Tuple[WeightedTemplate, ...] = ()
    softgoals: Tuple[SoftGoalDecl, ...] = ()
    links: Tuple[ContributionLink, ...] = ()
    # (namespace, name) -> (line, column) of the declaration
    positions: Dict[tuple, Tuple[int, int]] = field(default_factory=dict, compare=False, repr=False)

    def requirement(self, rid: str) -> Requirement:
        return _find(self.requirements, "id", rid, "requirement")

    def variable(self, name: str) -> LinguisticVariable:
        return _find(self.variables, "name", name, "linguistic variable")

    def scale(self, name: str) -> LikertScale:
        return _find(self.scales, "name", name, "scale")

    def template(self, name: str) -> WeightedTemplate:
        return _find(self.templates, "name", name, "template")

    def goal_nodes(self) -> Tuple[SoftGoalNode, ...]:
        """Soft-goal declarations flattened into forest nodes.

        Each ``leaf "req"`` child becomes its own node with id ``goal/req``;
        a node's weight is the weight its parent gives it (roots weigh 1).
        """
        weights = {}
        for g in self.softgoals:
            for c in g.children:
                cid = c.ref if c.kind == "subgoal" else leaf_node_id(g.id, c.ref)
                weights.setdefault(cid, c.weight)
        nodes = []
        for g in self.softgoals:
            kids = tuple(c.ref if c.kind == "subgoal" else leaf_node_id(g.id, c.ref) for c in g.children)
            threshold = DEFAULT_THRESHOLD if g.threshold is None else g.threshold
            nodes.append(SoftGoalNode(g.id, weights.get(g.id, 1.0), kids, None, threshold, g.id))
            for c in g.children:
                if c.kind == "leaf":
                    lid = leaf_node_id(g.id, c.ref)
                    nodes.append(SoftGoalNode(lid, c.weight, (), c.ref, DEFAULT_THRESHOLD, c.ref))
        return tuple(nodes)

    def data_bindings(self) -> Dict[str, Tuple[str, ...]]:
        """Requirement id -> names of the data sources it reads."""
        out = {}
        for r in self.requirements:
            v = r.verification
            if isinstance(v, BooleanCheck):
                out[r.id] = (v.test,)
            elif isinstance(v, MetricThreshold):
                out[r.id] = (v.metric,)
            elif isinstance(v, LikertSurvey):
                out[r.id] = (v.survey,)
            elif isinstance(v, FuzzyAssessment):
                out[r.id] = (v.input,)
            elif isinstance(v, TemplateAssessment) and v.template in {t.name for t in self.templates}:
                out[r.id] = tuple(s.name for s in self.template(v.template).subs)
            else:
                out[r.id] = ()
        return out


def leaf_node_id(goal: str, requirement: str) -> str:
    return f"{goal}/{requirement}"


def _find(items, attr, key, what):
    for item in items:
        if getattr(item, attr) == key:
            return item
    raise KeyError(f"no {what} named {key!r}")
