"""Likert scales, reverse coding, attitude scores and survey decisions."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence, Tuple

from .errors import (
    ArgumentError,
    CompletenessError,
    ConsistencyError,
    LookupFailure,
    ValidationError,
)

DEFAULT_BAND = 0.05

_SEVEN_POINT = (
    ("Strongly Agree", 7),
    ("Agree", 6),
    ("Agree Somewhat", 5),
    ("Undecided", 4),
    ("Disagree Somewhat", 3),
    ("Disagree", 2),
    ("Strongly Disagree", 1),
)
_DROPPED = {
    5: ("Agree Somewhat", "Disagree Somewhat"),
    6: ("Undecided",),
    7: (),
}


class Polarity(str, Enum):
    FAVORABLE = "favorable"
    UNFAVORABLE = "unfavorable"


@dataclass(frozen=True)
class LikertScale:
    name: str
    categories: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        cats = tuple((str(label), value) for label, value in self.categories)
        object.__setattr__(self, "categories", cats)
        if not 5 <= len(cats) <= 7:
            raise ValidationError(f"scale {self.name} has {len(cats)} categories; 5 to 7 are allowed")
        labels = [label for label, _ in cats]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"scale {self.name} repeats a category label")
        values = [v for _, v in cats]
        if any(isinstance(v, bool) or not isinstance(v, int) for v in values):
            raise ValidationError(f"scale {self.name} values must be integers")
        steps = {b - a for a, b in zip(values, values[1:])}
        if steps not in ({1}, {-1}):
            raise ValidationError(f"scale {self.name} values must be consecutive and strictly monotone")

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(label for label, _ in self.categories)

    @property
    def min_value(self) -> int:
        return min(v for _, v in self.categories)

    @property
    def max_value(self) -> int:
        return max(v for _, v in self.categories)

    @property
    def midvalue(self) -> float:
        return (self.min_value + self.max_value) / 2

    def value_of(self, label: str) -> int:
        for lab, v in self.categories:
            if lab == label:
                return v
        raise LookupFailure(f"label {label!r} is not a category of scale {self.name}")

    def label_of(self, value: int) -> str:
        for lab, v in self.categories:
            if v == value:
                return lab
        raise LookupFailure(f"value {value} is not used by scale {self.name}")


def standard_scale(points: int, name: Optional[str] = None) -> LikertScale:
    """Agree/disagree scale with 5, 6 or 7 points, numbered down to 1."""
    if points not in _DROPPED:
        raise ArgumentError(f"standard scales have 5, 6 or 7 points, not {points}")
    kept = [label for label, _ in _SEVEN_POINT if label not in _DROPPED[points]]
    cats = tuple((label, points - i) for i, label in enumerate(kept))
    return LikertScale(name or f"likert{points}", cats)


def item_value(scale: LikertScale, choice: str, polarity=Polarity.FAVORABLE) -> int:
    value = scale.value_of(choice)
    if Polarity(polarity) is Polarity.UNFAVORABLE:
        return scale.min_value + scale.max_value - value
    return value


@dataclass(frozen=True)
class SurveyKey:
    items: Tuple[Tuple[str, Polarity], ...]

    def __post_init__(self):
        items = tuple((str(i), Polarity(p)) for i, p in self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise ValidationError("a survey key needs at least one item")
        ids = [i for i, _ in items]
        if len(set(ids)) != len(ids):
            raise ValidationError("survey key repeats an item id")

    @classmethod
    def all_favorable(cls, item_ids: Sequence[str]) -> "SurveyKey":
        return cls(tuple((i, Polarity.FAVORABLE) for i in item_ids))

    @property
    def item_ids(self) -> Tuple[str, ...]:
        return tuple(i for i, _ in self.items)

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class AttitudeScore:
    respondent: str
    score: int
    min_possible: int
    max_possible: int


def score_respondent(
    scale: LikertScale, key: SurveyKey, answers: Mapping[str, str], respondent: str = ""
) -> AttitudeScore:
    """Summed, reverse-coded score of one respondent over every key item."""
    ids = key.item_ids
    missing = [i for i in ids if i not in answers]
    extra = sorted(i for i in answers if i not in set(ids))
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing " + ", ".join(missing))
        if extra:
            parts.append("unexpected " + ", ".join(extra))
        who = f"respondent {respondent}: " if respondent else ""
        raise CompletenessError(who + "; ".join(parts), missing, extra)
    total = sum(item_value(scale, answers[i], pol) for i, pol in key.items)
    n = len(ids)
    return AttitudeScore(respondent, total, n * scale.min_value, n * scale.max_value)


@dataclass(frozen=True)
class SurveyStats:
    count: int
    mean: float
    median: int
    min: int
    max: int
    histogram: Tuple[Tuple[int, int], ...]
    min_possible: int
    max_possible: int


def aggregate_scores(scores: Sequence[AttitudeScore]) -> SurveyStats:
    if not scores:
        raise ArgumentError("aggregate_scores needs at least one score")
    bounds = {(s.min_possible, s.max_possible) for s in scores}
    if len(bounds) != 1:
        raise ConsistencyError(f"scores come from different surveys: bounds {sorted(bounds)}")
    values = sorted(s.score for s in scores)
    n = len(values)
    lo, hi = bounds.pop()
    mean = min(max(math.fsum(values) / n, values[0]), values[-1])
    return SurveyStats(
        count=n,
        mean=mean,
        median=values[(n - 1) // 2],
        min=values[0],
        max=values[-1],
        histogram=tuple(sorted(Counter(values).items())),
        min_possible=lo,
        max_possible=hi,
    )


class Attitude(str, Enum):
    FAVORABLE = "Favorable"
    UNDECIDED = "Undecided"
    UNFAVORABLE = "Unfavorable"


@dataclass(frozen=True)
class Decision:
    attitude: Attitude
    margin: float  # mean minus neutral point
    neutral: float
    band: float  # half-width of the undecided zone, in score units


def attitude_decision(
    stats: SurveyStats, n_items: int, scale: LikertScale, band: Optional[float] = None
) -> Decision:
    """Favorable/Unfavorable/Undecided verdict around the neutral summed score.

    ``band`` is a fraction of the full score range (default 5%); means within
    that distance of neutral are Undecided.
    """
    band = DEFAULT_BAND if band is None else band
    if not 0.0 <= band <= 0.5:
        raise ArgumentError(f"decision band {band} must lie in [0, 0.5]")
    lo, hi = n_items * scale.min_value, n_items * scale.max_value
    if (stats.min_possible, stats.max_possible) != (lo, hi):
        raise ConsistencyError(
            f"stats cover [{stats.min_possible}, {stats.max_possible}] but {n_items} items "
            f"on scale {scale.name} span [{lo}, {hi}]"
        )
    neutral = n_items * scale.midvalue
    width = band * (hi - lo)
    if stats.mean > neutral + width:
        attitude = Attitude.FAVORABLE
    elif stats.mean < neutral - width:
        attitude = Attitude.UNFAVORABLE
    else:
        attitude = Attitude.UNDECIDED
    return Decision(attitude, stats.mean - neutral, neutral, width)


def score_survey(scale: LikertScale, key: SurveyKey, rows: Mapping[str, Mapping[str, str]]):
    """Score every respondent in ``rows`` (respondent -> item -> label)."""
    return [score_respondent(scale, key, answers, rid) for rid, answers in rows.items()]
