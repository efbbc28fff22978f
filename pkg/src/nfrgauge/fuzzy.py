"""Fuzzy sets, linguistic variables, hedges and weighted grading templates.

Membership functions are piecewise linear (triangle, trapezoid) or crisp
intervals.  Everything here is immutable and side-effect free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArgumentError,
    CoverageError,
    DomainError,
    LookupFailure,
    ValidationError,
)


def _check_real(name: str, value: float, allow_inf: bool = False) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"parameter {name} must be a real number, got {value!r}")
    if math.isnan(value) or (not allow_inf and math.isinf(value)):
        raise ValidationError(f"parameter {name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Triangular:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in "abc":
            _check_real(name, getattr(self, name))
        if self.a > self.b:
            raise ValidationError(f"triangle parameter b={self.b} is below a={self.a}")
        if self.b > self.c:
            raise ValidationError(f"triangle parameter c={self.c} is below b={self.b}")

    def __call__(self, x: float) -> float:
        a, b, c = self.a, self.b, self.c
        if x == b:
            return 1.0
        if a < x < b:
            return (x - a) / (b - a)
        if b < x < c:
            return (c - x) / (c - b)
        return 0.0

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class Trapezoidal:
    """Trapezoid; ``a``/``b`` may be -inf and ``c``/``d`` +inf to form shoulders."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            _check_real(name, getattr(self, name), allow_inf=True)
        if self.b == math.inf or self.a == math.inf:
            raise ValidationError("trapezoid parameters a and b cannot be +inf")
        if self.c == -math.inf or self.d == -math.inf:
            raise ValidationError("trapezoid parameters c and d cannot be -inf")
        if self.a == -math.inf and self.b != -math.inf:
            raise ValidationError("trapezoid parameter a=-inf needs b=-inf (an unbounded shoulder)")
        if self.d == math.inf and self.c != math.inf:
            raise ValidationError("trapezoid parameter d=inf needs c=inf (an unbounded shoulder)")
        for lo, hi in (("a", "b"), ("b", "c"), ("c", "d")):
            if getattr(self, lo) > getattr(self, hi):
                raise ValidationError(
                    f"trapezoid parameter {hi}={getattr(self, hi)} is below {lo}={getattr(self, lo)}"
                )

    def __call__(self, x: float) -> float:
        a, b, c, d = self.a, self.b, self.c, self.d
        if b <= x <= c:
            return 1.0
        if a < x < b:
            return (x - a) / (b - a)
        if c < x < d:
            return (d - x) / (d - c)
        return 0.0

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class CrispInterval:
    lo: float
    hi: float
    lo_inclusive: bool = True
    hi_inclusive: bool = True

    def __post_init__(self):
        _check_real("lo", self.lo, allow_inf=True)
        _check_real("hi", self.hi, allow_inf=True)
        if self.lo > self.hi:
            raise ValidationError(f"interval parameter hi={self.hi} is below lo={self.lo}")

    def __call__(self, x: float) -> float:
        above = x >= self.lo if self.lo_inclusive else x > self.lo
        below = x <= self.hi if self.hi_inclusive else x < self.hi
        return 1.0 if above and below else 0.0

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return (self.lo, self.hi)

    def __str__(self):
        left = "[" if self.lo_inclusive else "("
        right = "]" if self.hi_inclusive else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


MembershipFunction = Union[Triangular, Trapezoidal, CrispInterval]


def membership(mf: MembershipFunction, x: float) -> float:
    """Degree of ``x`` in the fuzzy set ``mf``; always within [0, 1]."""
    return mf(x)


def has_support_within(mf: MembershipFunction, lo: float, hi: float) -> bool:
    """True when ``mf`` is nonzero somewhere in the closed interval [lo, hi].

    Continuous shapes peak at an endpoint or breakpoint; open crisp
    intervals are caught by the midpoints between those points.
    """
    if lo > hi:
        return False
    points = sorted({lo, hi} | {p for p in mf.breakpoints if lo <= p <= hi})
    points += [(p + q) / 2 for p, q in zip(points, points[1:]) if math.isfinite(p + q)]
    return any(mf(p) > 0.0 for p in points)


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    terms: Tuple[Tuple[str, MembershipFunction], ...]
    unit: str = ""
    domain: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((str(n), mf) for n, mf in self.terms))
        if len(self.terms) < 2:
            raise ValidationError(f"linguistic variable {self.name} needs at least 2 terms")
        names = [n for n, _ in self.terms]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValidationError(f"linguistic variable {self.name} repeats term(s): {', '.join(dupes)}")
        if self.domain is not None:
            lo, hi = self.domain
            if lo > hi:
                raise ValidationError(f"domain of {self.name} is empty: [{lo}, {hi}]")
            object.__setattr__(self, "domain", (lo, hi))
            for n, mf in self.terms:
                if not has_support_within(mf, lo, hi):
                    raise ValidationError(
                        f"term {n} of {self.name} has no support inside domain [{lo}, {hi}]"
                    )

    @property
    def term_names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.terms)

    def term(self, name: str) -> MembershipFunction:
        for n, mf in self.terms:
            if n == name:
                return mf
        raise LookupFailure(f"variable {self.name} has no term {name!r}")


def fuzzify(lv: LinguisticVariable, x: float) -> dict:
    """Map ``x`` to a degree for every term of ``lv``, in declaration order."""
    if lv.domain is not None:
        lo, hi = lv.domain
        if not lo <= x <= hi:
            raise DomainError(f"{x} is outside the domain [{lo}, {hi}] of {lv.name}")
    return {name: membership(mf, x) for name, mf in lv.terms}


class Hedge(str, Enum):
    NOT = "not"
    VERY = "very"
    SOMEWHAT = "somewhat"
    SLIGHTLY = "slightly"


def apply_hedge(hedge: Union[Hedge, str], mu: float) -> float:
    hedge = Hedge(hedge)
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"membership degree {mu} is outside [0, 1]")
    if hedge is Hedge.NOT:
        return 1.0 - mu
    if hedge is Hedge.VERY:
        return mu * mu
    if hedge is Hedge.SOMEWHAT:
        return math.sqrt(mu)
    # cube root: weaker dilation than somewhat
    return mu ** (1.0 / 3.0)


def best_label(degrees: Mapping[str, float], order: Optional[Sequence[str]] = None) -> Tuple[str, float]:
    """Term with the highest degree; ties go to the earliest term in ``order``.

    ``order`` defaults to the mapping's own iteration order, which is the
    declaration order for anything produced by :func:`fuzzify`.
    """
    if not degrees:
        raise ArgumentError("best_label needs at least one term")
    names = list(order) if order is not None else list(degrees)
    names += [n for n in degrees if n not in names]
    best = None
    for name in names:
        if name not in degrees:
            continue
        if best is None or degrees[name] > degrees[best]:
            best = name
    return best, degrees[best]


def weighted_score(parts: Iterable[Tuple[float, float]]) -> float:
    """Weighted mean of (degree, weight) pairs."""
    parts = list(parts)
    if not parts:
        raise ArgumentError("weighted_score needs at least one (degree, weight) pair")
    for mu, w in parts:
        if not (w > 0) or math.isinf(w):
            raise ArgumentError(f"weights must be positive and finite, got {w}")
        if not 0.0 <= mu <= 1.0:
            raise ArgumentError(f"degree {mu} is outside [0, 1]")
    total = math.fsum(w for _, w in parts)
    score = math.fsum(mu * w for mu, w in parts) / total
    degrees = [mu for mu, _ in parts]
    return min(max(score, min(degrees)), max(degrees))


@dataclass(frozen=True)
class Level:
    name: str
    shape: MembershipFunction


@dataclass(frozen=True)
class SubNfr:
    name: str
    weight: float
    levels: Tuple[Level, ...]
    value_range: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if isinstance(self.weight, bool) or not isinstance(self.weight, (int, float)) \
                or not (self.weight > 0) or math.isinf(self.weight):
            raise ValidationError(f"weight of {self.name} must be positive and finite, got {self.weight}")
        if not self.levels:
            raise ValidationError(f"sub-NFR {self.name} has no grading levels")
        names = [lv.name for lv in self.levels]
        if len(set(names)) != len(names):
            raise ValidationError(f"sub-NFR {self.name} repeats a level name")
        if self.value_range is not None:
            lo, hi = self.value_range
            if lo > hi:
                raise ValidationError(f"value range of {self.name} is empty: [{lo}, {hi}]")
            object.__setattr__(self, "value_range", (lo, hi))

    @property
    def level_names(self) -> Tuple[str, ...]:
        return tuple(lv.name for lv in self.levels)


@dataclass(frozen=True)
class StatusRow:
    name: str
    levels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))


@dataclass(frozen=True)
class WeightedTemplate:
    """Grading grid: sub-NFRs with weights, and status rows ordered best first."""

    name: str
    subs: Tuple[SubNfr, ...]
    rows: Tuple[StatusRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "subs", tuple(self.subs))
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.subs:
            raise ValidationError(f"template {self.name} has no sub-NFRs")
        if not self.rows:
            raise ValidationError(f"template {self.name} has no status rows")
        names = [s.name for s in self.subs]
        if len(set(names)) != len(names):
            raise ValidationError(f"template {self.name} repeats a sub-NFR name")
        statuses = [r.name for r in self.rows]
        if len(set(statuses)) != len(statuses):
            raise ValidationError(f"template {self.name} repeats a status name")
        for row in self.rows:
            if len(row.levels) != len(self.subs):
                raise ValidationError(
                    f"status {row.name} gives {len(row.levels)} level(s) for {len(self.subs)} sub-NFR(s)"
                )
            for sub, level in zip(self.subs, row.levels):
                if level not in sub.level_names:
                    raise ValidationError(f"status {row.name} references undefined level {level} of {sub.name}")

    def sub(self, name: str) -> SubNfr:
        for s in self.subs:
            if s.name == name:
                return s
        raise LookupFailure(f"template {self.name} has no sub-NFR {name!r}")

    @property
    def total_weight(self) -> float:
        return math.fsum(s.weight for s in self.subs)

    def level_ranking(self, sub_index: int) -> Tuple[str, ...]:
        """Levels of one sub-NFR ordered best to worst.

        The order is the order in which status rows (best first) first use
        each level; levels no row uses trail in declaration order.
        """
        sub = self.subs[sub_index]
        ranked = []
        for row in self.rows:
            lvl = row.levels[sub_index]
            if lvl not in ranked:
                ranked.append(lvl)
        ranked += [n for n in sub.level_names if n not in ranked]
        return tuple(ranked)

    def level_value(self, sub_index: int, level: str) -> float:
        """Evenly spaced number in [0, 1] for a level, worst 0 and best 1."""
        ranking = self.level_ranking(sub_index)
        n = len(ranking)
        if n == 1:
            return 1.0
        return (n - 1 - ranking.index(level)) / (n - 1)

    def problems(self) -> list:
        """Coverage, overlap and ranking defects, as human-readable messages."""
        out = []
        for i, sub in enumerate(self.subs):
            used = {row.levels[i] for row in self.rows}
            for lvl in sub.level_names:
                if lvl not in used:
                    out.append(f"level {lvl} of {sub.name} is used by no status row, so its rank is undefined")
            out.extend(_grading_problems(sub))
        return out


def _grading_problems(sub: SubNfr) -> list:
    shapes = [lv.shape for lv in sub.levels]
    if all(isinstance(s, CrispInterval) for s in shapes):
        return _crisp_problems(sub)
    lo, hi = sub.value_range if sub.value_range else (
        min(min(s.breakpoints) for s in shapes), max(max(s.breakpoints) for s in shapes))
    # fuzzy gradings may overlap; only require every breakpoint and midpoint be graded
    probes = sorted({p for s in shapes for p in s.breakpoints if lo <= p <= hi} | {lo, hi})
    probes += [(p + q) / 2 for p, q in zip(probes, probes[1:]) if math.isfinite(p + q)]
    for x in probes:
        if math.isfinite(x) and max(s(x) for s in shapes) == 0.0:
            return [f"value {x} of {sub.name} falls into no grading level"]
    return []


def _crisp_problems(sub: SubNfr) -> list:
    out = []
    ivs = sorted(
        ((lv.name, lv.shape) for lv in sub.levels),
        key=lambda p: (p[1].lo, not p[1].lo_inclusive, p[1].hi, p[1].hi_inclusive),
    )
    for (n1, a), (n2, b) in zip(ivs, ivs[1:]):
        if b.lo < a.hi or (b.lo == a.hi and a.hi_inclusive and b.lo_inclusive):
            out.append(f"levels {n1} {a} and {n2} {b} of {sub.name} overlap")
        elif b.lo > a.hi or (b.lo == a.hi and not a.hi_inclusive and not b.lo_inclusive):
            gap = CrispInterval(a.hi, b.lo, not a.hi_inclusive, not b.lo_inclusive)
            out.append(f"levels of {sub.name} leave the gap {gap} uncovered")
    if sub.value_range is not None:
        lo, hi = sub.value_range
        first, last = ivs[0][1], ivs[-1][1]
        covers_lo = first.lo < lo or (first.lo == lo and (first.lo_inclusive or math.isinf(lo)))
        covers_hi = last.hi > hi or (last.hi == hi and (last.hi_inclusive or math.isinf(hi)))
        if not covers_lo:
            out.append(f"levels of {sub.name} do not cover the lower end {lo} of its range")
        if not covers_hi:
            out.append(f"levels of {sub.name} do not cover the upper end {hi} of its range")
    return out


def grade_sub_nfr(template: WeightedTemplate, sub_name: str, value: float) -> Tuple[str, float]:
    """Grading level for one sub-NFR value; crisp levels yield degree 1."""
    sub = template.sub(sub_name)
    if sub.value_range is not None:
        lo, hi = sub.value_range
        if not lo <= value <= hi:
            raise DomainError(f"{value} is outside the range [{lo}, {hi}] of {sub_name}")
    best, degree = None, 0.0
    for lv in sub.levels:
        mu = membership(lv.shape, value)
        if mu > degree:
            best, degree = lv.name, mu
    if best is None:
        raise CoverageError(f"value {value} of {sub_name} falls into no grading level of template {template.name}")
    return best, degree


@dataclass(frozen=True)
class TemplateResult:
    status: str
    score: float
    raw_score: float
    max_raw: float
    levels: Tuple[Tuple[str, str], ...]
    exact_match: bool


def evaluate_template(template: WeightedTemplate, values: Mapping[str, float]) -> TemplateResult:
    """Grade every sub-NFR and pick the overall status.

    The status is the first row whose levels all match.  Otherwise each
    sub-NFR implies the first row that uses its level, and the worst of
    those implied rows wins.
    """
    graded = []
    for sub in template.subs:
        if sub.name not in values:
            raise ArgumentError(f"no value supplied for sub-NFR {sub.name} of template {template.name}")
        level, _ = grade_sub_nfr(template, sub.name, values[sub.name])
        graded.append(level)

    status, exact = None, False
    for row in template.rows:
        if list(row.levels) == graded:
            status, exact = row.name, True
            break
    if status is None:
        worst = 0
        for i, level in enumerate(graded):
            implied = next(k for k, row in enumerate(template.rows) if row.levels[i] == level) \
                if any(row.levels[i] == level for row in template.rows) else len(template.rows) - 1
            worst = max(worst, implied)
        status = template.rows[worst].name

    parts = [(template.level_value(i, lvl), sub.weight) for i, (sub, lvl) in enumerate(zip(template.subs, graded))]
    score = weighted_score(parts)
    raw = math.fsum(v * w for v, w in parts)
    return TemplateResult(
        status=status,
        score=score,
        raw_score=raw,
        max_raw=template.total_weight,
        levels=tuple((s.name, lvl) for s, lvl in zip(template.subs, graded)),
        exact_match=exact,
    )
