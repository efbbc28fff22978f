"""CSV loaders for survey responses, survey keys, check results and measurements.

Every file is UTF-8, comma separated, double-quote quoted, with a mandatory
header that must match exactly.
"""
from __future__ import annotations

import csv
import difflib
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

from .errors import (
    DuplicateResponseError,
    EmptyInputError,
    IngestError,
    LabelError,
    ValidationError,
)
from .likert import LikertScale, Polarity, SurveyKey

RESPONSES_HEADER = ["respondent_id", "item_id", "choice"]
MEASUREMENTS_HEADER = ["metric", "unit", "value"]
KEY_HEADER = ["item_id", "polarity"]
CHECKS_HEADER = ["test_id", "result"]


@dataclass(frozen=True)
class ResponseSet:
    scale_name: str
    rows: Dict[str, Dict[str, str]]  # respondent -> item -> label


@dataclass(frozen=True)
class MeasurementSeries:
    metric: str
    unit: str
    samples: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))
        if not self.samples:
            raise ValidationError(f"series {self.metric} has no samples")
        if not all(math.isfinite(s) for s in self.samples):
            raise ValidationError(f"series {self.metric} has a non-finite sample")


@dataclass(frozen=True)
class SeriesSummary:
    count: int
    min: float
    max: float
    mean: float
    p95: float

    def aggregate(self, name: str) -> float:
        return {"max": self.max, "min": self.min, "mean": self.mean, "p95": self.p95}[name]


def _read_rows(path, header):
    """Yield (line number, row) for every data row after checking the header."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, strict=True)
        try:
            first = next(reader, None)
            if first is None:
                raise EmptyInputError("file is empty", path, 1)
            if first != header:
                raise IngestError(f"expected header {','.join(header)}, got {','.join(first)}", path, 1)
            for row in reader:
                if not row:
                    continue
                if len(row) != len(header):
                    raise IngestError(f"expected {len(header)} fields, got {len(row)}", path, reader.line_num)
                yield reader.line_num, [field.strip() for field in row]
        except csv.Error as exc:
            raise IngestError(f"malformed CSV: {exc}", path, reader.line_num) from exc
        except UnicodeDecodeError as exc:
            raise IngestError(f"not valid UTF-8: {exc}", path) from exc


def load_responses(path, scale: LikertScale) -> ResponseSet:
    rows: Dict[str, Dict[str, str]] = {}
    labels = scale.labels
    for line, (rid, item, choice) in _read_rows(path, RESPONSES_HEADER):
        if not rid or not item:
            raise IngestError("respondent_id and item_id must be non-empty", path, line)
        if choice not in labels:
            near = difflib.get_close_matches(choice, labels, n=1, cutoff=0.0)
            raise LabelError(f"unknown choice {choice!r} for scale {scale.name}", path, line,
                             near[0] if near else None)
        answers = rows.setdefault(rid, {})
        if item in answers:
            raise DuplicateResponseError(f"duplicate answer for respondent {rid}, item {item}", path, line)
        answers[item] = choice
    return ResponseSet(scale.name, rows)


def write_responses(path, responses: ResponseSet) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESPONSES_HEADER)
        for rid, answers in responses.rows.items():
            for item, choice in answers.items():
                w.writerow([rid, item, choice])


def load_key(path) -> SurveyKey:
    items = []
    seen = set()
    for line, (item, polarity) in _read_rows(path, KEY_HEADER):
        if item in seen:
            raise DuplicateResponseError(f"item {item} listed twice", path, line)
        seen.add(item)
        try:
            items.append((item, Polarity(polarity.lower())))
        except ValueError:
            raise IngestError(f"polarity must be favorable or unfavorable, got {polarity!r}", path, line) from None
    if not items:
        raise EmptyInputError("survey key lists no items", path)
    return SurveyKey(tuple(items))


def load_checks(path) -> Dict[str, bool]:
    """Functional check outcomes: ``test_id,result`` with result pass or fail."""
    out = {}
    for line, (test, result) in _read_rows(path, CHECKS_HEADER):
        verdict = result.lower()
        if verdict not in ("pass", "fail"):
            raise IngestError(f"result must be pass or fail, got {result!r}", path, line)
        out[test] = verdict == "pass"
    return out


def load_measurements(path) -> List[MeasurementSeries]:
    grouped: Dict[str, Tuple[str, list]] = {}
    for line, (metric, unit, raw) in _read_rows(path, MEASUREMENTS_HEADER):
        try:
            value = float(raw)
        except ValueError:
            raise IngestError(f"value {raw!r} is not a number", path, line) from None
        if not math.isfinite(value):
            raise IngestError(f"value {raw!r} is not finite", path, line)
        if metric not in grouped:
            grouped[metric] = (unit, [])
        elif grouped[metric][0] != unit:
            raise IngestError(f"metric {metric} changes unit from {grouped[metric][0]!r} to {unit!r}", path, line)
        grouped[metric][1].append(value)
    if not grouped:
        raise EmptyInputError("no measurements", path)
    return [MeasurementSeries(m, unit, vals) for m, (unit, vals) in grouped.items()]


def summarize(series: MeasurementSeries) -> SeriesSummary:
    """Exact min/max/mean and a nearest-rank 95th percentile."""
    ordered = sorted(series.samples)
    n = len(ordered)
    rank = (95 * n + 99) // 100  # ceil(0.95 * n) without float rounding
    mean = min(max(math.fsum(ordered) / n, ordered[0]), ordered[-1])
    return SeriesSummary(n, ordered[0], ordered[-1], mean, ordered[rank - 1])
