"""Command-line entry point.

Exit codes: 0 success, 1 requirements failing or unsatisfied, 2 spec errors,
3 I/O or data errors, 64 usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .dsl import parse, validate
from .dsl.model import AGGREGATORS
from .errors import IngestError, NfrGaugeError
from .evaluator import classify, evaluate_project
from .ingest import load_key, load_responses
from .likert import Attitude, aggregate_scores, attitude_decision, score_survey, standard_scale
from .report import table, to_json, to_text

EXIT_OK = 0
EXIT_FAILING = 1
EXIT_SPEC = 2
EXIT_DATA = 3
EXIT_USAGE = 64

FORMAT_ENV = "NFRGAUGE_FORMAT"
FORMATS = ("text", "json")


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec_path: Optional[Path] = None
    data_dir: Optional[Path] = None
    output_format: str = "text"
    out: Optional[Path] = None
    band: Optional[float] = None
    aggregator: Optional[str] = None
    scale_points: int = 7
    key_path: Optional[Path] = None
    responses_path: Optional[Path] = None


def _band(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid band {text!r}") from None
    if not 0.0 <= value <= 0.5:
        raise argparse.ArgumentTypeError(f"band {value} must lie in [0, 0.5] (fraction of the score range)")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="nfrgauge", description="Evaluate measurable and scalable NFRs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    fmt = dict(choices=FORMATS, default=None, help=f"output format (default: ${FORMAT_ENV} or text)")

    v = sub.add_parser("validate", help="check a .nfr file and print diagnostics")
    v.add_argument("spec", type=Path)
    v.add_argument("--format", **fmt)

    c = sub.add_parser("classify", help="print the FR/M-NFR/S-NFR/Vague classification")
    c.add_argument("spec", type=Path)
    c.add_argument("--format", **fmt)

    e = sub.add_parser("evaluate", help="evaluate a spec against a data directory")
    e.add_argument("spec", type=Path)
    e.add_argument("--data", type=Path, required=True, help="directory holding the CSV data files")
    e.add_argument("--format", **fmt)
    e.add_argument("--out", type=Path, help="write the report here instead of standard output")
    e.add_argument("--band", type=_band, help="default Likert decision band, fraction of range")
    e.add_argument("--aggregator", choices=AGGREGATORS,
                   help="default aggregator for M-NFRs that do not name one")

    s = sub.add_parser("likert-score", help="score a Likert survey")
    s.add_argument("--scale", type=int, choices=(5, 6, 7), default=7)
    s.add_argument("--key", type=Path, required=True, help="CSV with item_id,polarity")
    s.add_argument("--responses", type=Path, required=True, help="CSV with respondent_id,item_id,choice")
    s.add_argument("--band", type=_band)
    s.add_argument("--format", **fmt)
    return p


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    output_format = args.format or os.environ.get(FORMAT_ENV) or "text"
    if output_format not in FORMATS:
        print(f"nfrgauge: error: {FORMAT_ENV}={output_format!r} is not one of {', '.join(FORMATS)}",
              file=sys.stderr)
        raise _UsageError(output_format)
    return RunConfig(
        command=args.command,
        spec_path=getattr(args, "spec", None),
        data_dir=getattr(args, "data", None),
        output_format=output_format,
        out=getattr(args, "out", None),
        band=getattr(args, "band", None),
        aggregator=getattr(args, "aggregator", None),
        scale_points=getattr(args, "scale", 7),
        key_path=getattr(args, "key", None),
        responses_path=getattr(args, "responses", None),
    )


def _load_spec(path: Path):
    """Parse and validate; returns (spec, text, diagnostics)."""
    text = path.read_text(encoding="utf-8")
    result = parse(text)
    diags = list(result.diagnostics)
    if result.spec is not None:
        diags += validate(result.spec, text)
    return result.spec, diags


def _report_diagnostics(path: Path, diags) -> int:
    errors = 0
    for d in diags:
        print(d.format(str(path)), file=sys.stderr)
        errors += d.severity == "error"
    return errors


def _cmd_validate(cfg: RunConfig) -> int:
    spec, diags = _load_spec(cfg.spec_path)
    errors = _report_diagnostics(cfg.spec_path, diags)
    warnings = len(diags) - errors
    if cfg.output_format == "json":
        print(json.dumps({
            "spec": str(cfg.spec_path),
            "errors": errors,
            "warnings": warnings,
            "diagnostics": [
                {"severity": d.severity, "line": d.line, "column": d.column, "message": d.message}
                for d in diags
            ],
        }, indent=2))
    else:
        print(f"{cfg.spec_path}: {errors} error(s), {warnings} warning(s)")
    return EXIT_SPEC if errors else EXIT_OK


def _cmd_classify(cfg: RunConfig) -> int:
    spec, diags = _load_spec(cfg.spec_path)
    if _report_diagnostics(cfg.spec_path, [d for d in diags if d.severity == "error"]):
        return EXIT_SPEC
    rows = [(r.id, classify(r)) for r in spec.requirements]
    if cfg.output_format == "json":
        print(json.dumps([{"id": rid, "kind": c.kind.value, "rationale": c.rationale} for rid, c in rows],
                         indent=2, ensure_ascii=False))
    else:
        print(table(["REQUIREMENT", "KIND", "RATIONALE"], [[rid, c.kind.value, c.rationale] for rid, c in rows]))
    return EXIT_OK


def _cmd_evaluate(cfg: RunConfig) -> int:
    spec, diags = _load_spec(cfg.spec_path)
    if _report_diagnostics(cfg.spec_path, [d for d in diags if d.severity == "error"]):
        return EXIT_SPEC
    report = evaluate_project(spec, cfg.data_dir, cfg.aggregator, cfg.band)
    body = to_json(report) if cfg.output_format == "json" else to_text(report)
    if cfg.out is not None:
        cfg.out.write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    return EXIT_FAILING if report.has_failures else EXIT_OK


def _cmd_likert(cfg: RunConfig) -> int:
    scale = standard_scale(cfg.scale_points)
    key = load_key(cfg.key_path)
    responses = load_responses(cfg.responses_path, scale)
    if not responses.rows:
        raise IngestError("no responses", cfg.responses_path)
    stats = aggregate_scores(score_survey(scale, key, responses.rows))
    decision = attitude_decision(stats, len(key), scale, cfg.band)
    if cfg.output_format == "json":
        print(json.dumps({
            "scale": scale.name,
            "items": len(key),
            "count": stats.count,
            "mean": stats.mean,
            "median": stats.median,
            "min": stats.min,
            "max": stats.max,
            "min_possible": stats.min_possible,
            "max_possible": stats.max_possible,
            "histogram": [[s, n] for s, n in stats.histogram],
            "decision": decision.attitude.value,
            "neutral": decision.neutral,
            "band": decision.band,
            "margin": decision.margin,
        }, indent=2))
    else:
        print(table(
            ["RESPONDENTS", "MEAN", "MEDIAN", "MIN", "MAX", "RANGE"],
            [[str(stats.count), f"{stats.mean:.4f}", str(stats.median), str(stats.min), str(stats.max),
              f"[{stats.min_possible}, {stats.max_possible}]"]],
        ))
        print(f"decision: {decision.attitude.value} (neutral {decision.neutral:g}, "
              f"band +/-{decision.band:g}, margin {decision.margin:+.4g})")
    return EXIT_FAILING if decision.attitude is Attitude.UNFAVORABLE else EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "evaluate": _cmd_evaluate,
    "likert-score": _cmd_likert,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except _UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        return _COMMANDS[cfg.command](cfg)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"nfrgauge: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NfrGaugeError as exc:
        print(f"nfrgauge: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())
