"""Random, well-formed RequirementSpec values for round-trip testing."""
import math
import random
import re

from nfrgauge.dsl.lexer import KEYWORDS
from nfrgauge.dsl.model import (
    AGGREGATORS,
    COMPARATORS,
    BooleanCheck,
    FuzzyAssessment,
    GoalChild,
    LikertSurvey,
    MetricThreshold,
    Requirement,
    RequirementSpec,
    SoftGoalDecl,
    TemplateAssessment,
)
from nfrgauge.errors import ValidationError
from nfrgauge.fuzzy import (
    CrispInterval,
    Hedge,
    Level,
    LinguisticVariable,
    StatusRow,
    SubNfr,
    Trapezoidal,
    Triangular,
    WeightedTemplate,
)
from nfrgauge.goals import ContributionLink
from nfrgauge.likert import LikertScale, standard_scale

_WORDS = ["speed", "Load", "recov", "fail", "usab", "x", "Q", "cost", "sec", "perf"]
_TEXT = ['a', 'B', ' ', '"', '\\', '\n', '\t', 'é', '漢', '#', '{', '}', ';', ':', '0', '<']
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class _Names:
    def __init__(self, rng):
        self.rng = rng
        self.n = 0

    def __call__(self):
        self.n += 1
        return f"{self.rng.choice(_WORDS)}_{self.n}"


def _text(rng, max_len=12):
    return "".join(rng.choice(_TEXT) for _ in range(rng.randint(0, max_len)))


def _real(rng, lo=-50.0, hi=50.0):
    kind = rng.random()
    if kind < 0.4:
        return float(rng.randint(int(lo), int(hi)))
    if kind < 0.7:
        return round(rng.uniform(lo, hi), rng.randint(1, 4))
    return rng.uniform(lo, hi)


def _shape(rng):
    pts = sorted(_real(rng) for _ in range(4))
    kind = rng.randrange(3)
    if kind == 0:
        return Triangular(*pts[:3])
    if kind == 1:
        a, b, c, d = pts
        if rng.random() < 0.2:
            a = b = -math.inf
        if rng.random() < 0.2:
            c = d = math.inf
        return Trapezoidal(a, b, c, d)
    lo, hi = pts[0], pts[3]
    if rng.random() < 0.2:
        hi = math.inf
    return CrispInterval(lo, hi, rng.random() < 0.5, rng.random() < 0.5)


def _variable(rng, name):
    terms = [(f"t{i}_{rng.choice(_WORDS)}", _shape(rng)) for i in range(rng.randint(2, 4))]
    unit = rng.choice(["tps", "ms", "", "req/s", "per cent"])
    domain = None
    if rng.random() < 0.5:
        domain = (-60.0, 60.0)
    try:
        return LinguisticVariable(name, tuple(terms), unit, domain)
    except ValidationError:
        return LinguisticVariable(name, tuple(terms), unit, None)


def _scale(rng, name):
    if rng.random() < 0.5:
        return standard_scale(rng.choice([5, 6, 7]), name)
    n = rng.randint(5, 7)
    start = rng.randint(-3, 3)
    values = list(range(start, start + n))
    if rng.random() < 0.5:
        values.reverse()
    labels = [f"{_text(rng, 4)}#{i}" for i in range(n)]
    return LikertScale(name, tuple(zip(labels, values)))


def _template(rng, name, names):
    subs = []
    for _ in range(rng.randint(1, 3)):
        n_levels = rng.randint(1, 4)
        cuts = sorted({round(rng.uniform(0, 1), 3) for _ in range(n_levels - 1)})
        bounds = [0.0] + cuts + [math.inf if rng.random() < 0.3 else 1.0]
        levels = []
        left_incl = True
        for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
            last = i == len(bounds) - 2
            hi_incl = not math.isinf(hi) if last else rng.random() < 0.5
            levels.append(Level(f"L{i}", CrispInterval(lo, hi, left_incl, hi_incl)))
            left_incl = not hi_incl
        rng_decl = (0.0, bounds[-1]) if rng.random() < 0.5 else None
        subs.append(SubNfr(names(), float(rng.randint(1, 10)), tuple(levels), rng_decl))
    rows = []
    for k in range(rng.randint(1, 4)):
        status = _text(rng, 8) + f"#{k}" if rng.random() < 0.5 else f"status_{k}"
        rows.append(StatusRow(status, tuple(rng.choice(s.level_names) for s in subs)))
    return WeightedTemplate(name, tuple(subs), tuple(rows))


def random_spec(rng: random.Random) -> RequirementSpec:
    names = _Names(rng)
    variables = tuple(_variable(rng, names()) for _ in range(rng.randint(0, 2)))
    scales = tuple(_scale(rng, names()) for _ in range(rng.randint(0, 2)))
    templates = tuple(_template(rng, names(), names) for _ in range(rng.randint(0, 2)))

    reqs = []
    for i in range(rng.randint(0, 6)):
        rid = names() if rng.random() < 0.6 else _text(rng, 6) + f"#{i}"
        statement = _text(rng) if rng.random() < 0.7 else ""
        options = ["fr", "vague", "mnfr"]
        if scales:
            options.append("likert")
        if variables:
            options.append("fuzzy")
        if templates:
            options.append("template")
        kind = rng.choice(options)
        agg = rng.choice((None,) + AGGREGATORS)
        if kind == "fr":
            reqs.append(Requirement(rid, "requirement", statement, BooleanCheck(_text(rng, 6))))
        elif kind == "vague":
            reqs.append(Requirement(rid, rng.choice(["requirement", "snfr"]), statement, None))
        elif kind == "mnfr":
            v = MetricThreshold(names(), rng.choice(COMPARATORS), _real(rng),
                                rng.choice(["", "s", "ms", "req/s"]), agg)
            reqs.append(Requirement(rid, "mnfr", statement, v))
        elif kind == "likert":
            band = rng.choice([None, 0.0, 0.05, 0.25, 0.5])
            reqs.append(Requirement(rid, "snfr", statement,
                                    LikertSurvey(rng.choice(scales).name, _text(rng, 6), band)))
        elif kind == "fuzzy":
            lv = rng.choice(variables)
            hedge = rng.choice([None] + list(Hedge))
            v = FuzzyAssessment(lv.name, names(), rng.choice(lv.term_names), hedge, agg)
            reqs.append(Requirement(rid, "snfr", statement, v))
        else:
            reqs.append(Requirement(rid, "snfr", statement, TemplateAssessment(rng.choice(templates).name, agg)))

    goal_ids = [names() for _ in range(rng.randint(0, 5))]
    goals = []
    for i, gid in enumerate(goal_ids):
        children = []
        for j in range(i + 1, len(goal_ids)):
            # each later goal gets at most one parent: the first earlier goal that claims it
            if rng.random() < 0.4 and not any(c.ref == goal_ids[j] for g in goals for c in g.children) \
                    and not any(c.ref == goal_ids[j] for c in children):
                children.append(GoalChild(float(rng.randint(1, 5)), "subgoal", goal_ids[j]))
        for r in reqs:
            if rng.random() < 0.3:
                children.append(GoalChild(round(rng.uniform(0.1, 5), 2), "leaf", r.id))
        threshold = rng.choice([None, 0.0, 0.5, 0.7, 1.0])
        goals.append(SoftGoalDecl(gid, threshold, tuple(children)))

    links = []
    sources = goal_ids + [r.id for r in reqs if _IDENT.match(r.id) and r.id not in KEYWORDS]
    if goal_ids and sources:
        for _ in range(rng.randint(0, 4)):
            src, dst = rng.choice(sources), rng.choice(goal_ids)
            if src != dst:
                sign = rng.choice([-1.0, 1.0, 0.5, -0.25, round(rng.uniform(0.01, 1), 3)])
                links.append(ContributionLink(src, dst, sign))

    return RequirementSpec(
        project=_text(rng, 10),
        requirements=tuple(reqs),
        variables=variables,
        scales=scales,
        templates=templates,
        softgoals=tuple(goals),
        links=tuple(links),
    )
