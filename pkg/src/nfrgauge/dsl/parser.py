"""Recursive-descent parser for ``.nfr`` files with panic-mode recovery.

Errors never stop the parse.  Each one is recorded as a :class:`Diagnostic`
and the parser skips to the next ``;`` or to the end of the enclosing
``{ ... }`` block, so one pass reports every problem in the file.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import NfrGaugeError
from ..fuzzy import (
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
from ..goals import ContributionLink
from ..likert import LikertScale, standard_scale
from .lexer import Token, scan
from .model import (
    AGGREGATORS,
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

DECL_KEYWORDS = frozenset(
    ["requirement", "mnfr", "snfr", "linguistic", "scale", "template", "softgoal", "link"]
)
HEDGES = frozenset(h.value for h in Hedge)

_THRESHOLD = re.compile(
    r"^\s*(<=|>=|≤|≥|<|>)\s*(-?inf|-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\s*(.*?)\s*$"
)
_CANONICAL_CMP = {"≤": "<=", "≥": ">="}

# fields accepted inside requirement-like blocks: name -> value kind
_FIELDS = {
    "requirement": {"statement": "string", "verified_by": "string"},
    "mnfr": {"statement": "string", "metric": "ident", "threshold": "string", "aggregator": "ident"},
    "snfr": {
        "statement": "string",
        "scale": "ident",
        "survey": "string",
        "band": "number",
        "variable": "ident",
        "input": "ident",
        "target": "target",
        "template": "ident",
        "aggregator": "ident",
    },
}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error | warning
    line: int
    column: int
    message: str
    snippet: str = ""

    def format(self, path: str = "") -> str:
        where = f"{path}:" if path else ""
        text = f"{where}{self.line}:{self.column}: {self.severity}: {self.message}"
        if self.snippet:
            text += f"\n    {self.snippet}\n    {' ' * (self.column - 1)}^"
        return text


@dataclass
class ParseResult:
    spec: Optional[RequirementSpec]
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.spec is not None

    @property
    def errors(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


class _Fail(Exception):
    """Raised after a diagnostic is recorded, to unwind to a recovery point."""


def parse(text: str) -> ParseResult:
    """Parse ``.nfr`` source text into a resolved :class:`RequirementSpec`.

    Returns the spec when no errors were found; otherwise ``spec`` is None
    and ``diagnostics`` holds every error found in one pass.
    """
    return _Parser(text).run()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.lines = text.split("\n")
        tokens, lex_errors = scan(text)
        self.diags: List[Diagnostic] = []
        for e in lex_errors:
            self._diag_at(e.line, e.column, str(e).split(": ", 1)[1])
        last = len(self.lines)
        self.toks = tokens + [Token("eof", "", last, len(self.lines[-1]) + 1)]
        self.i = 0

        self.project = ""
        self.requirements: List[Requirement] = []
        self.variables: List[LinguisticVariable] = []
        self.scales: List[LikertScale] = []
        self.templates: List[WeightedTemplate] = []
        self.softgoals: List[SoftGoalDecl] = []
        self.links: List[ContributionLink] = []
        self.positions: Dict[tuple, Tuple[int, int]] = {}
        # references to resolve once everything is declared
        self.refs: List[Tuple[str, str, Token, str]] = []

    # -- diagnostics -----------------------------------------------------

    def _diag_at(self, line: int, column: int, message: str, severity: str = "error") -> None:
        snippet = self.lines[line - 1] if 0 < line <= len(self.lines) else ""
        self.diags.append(Diagnostic(severity, line, column, message, snippet.rstrip("\r")))

    def error(self, tok: Token, message: str) -> None:
        self._diag_at(tok.line, tok.column, message)

    def fail(self, tok: Token, message: str):
        self.error(tok, message)
        raise _Fail()

    # -- token stream ----------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, kind: str, lexeme: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def accept(self, kind: str, lexeme: Optional[str] = None) -> Optional[Token]:
        return self.advance() if self.at(kind, lexeme) else None

    @staticmethod
    def describe(tok: Token) -> str:
        if tok.kind == "eof":
            return "end of input"
        if tok.kind == "keyword":
            return f"keyword '{tok.lexeme}'"
        return f"{tok.kind} '{tok.lexeme}'" if tok.kind != "punct" else f"'{tok.lexeme}'"

    def expect(self, kind: str, lexeme: Optional[str] = None, what: str = "") -> Token:
        tok = self.peek()
        if tok.kind == kind and (lexeme is None or tok.lexeme == lexeme):
            return self.advance()
        wanted = what or (f"'{lexeme}'" if lexeme else kind)
        extra = " (keywords are reserved)" if kind == "ident" and tok.kind == "keyword" else ""
        self.fail(tok, f"expected {wanted}, found {self.describe(tok)}{extra}")

    def ident(self, what: str = "identifier") -> Token:
        return self.expect("ident", what=what)

    def name_or_string(self, what: str) -> Token:
        if self.at("string"):
            return self.advance()
        return self.expect("ident", what=what)

    def number(self, what: str = "number") -> Tuple[float, Token]:
        tok = self.expect("number", what=what)
        return tok.value, tok

    def finite_number(self, what: str = "number") -> Tuple[float, Token]:
        value, tok = self.number(what)
        if math.isinf(value):
            self.fail(tok, f"{what} must be finite")
        return value, tok

    def is_decl_start(self) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.lexeme in DECL_KEYWORDS and not (
            self.peek(1).kind == "punct" and self.peek(1).lexeme == ":"
        )

    # -- recovery --------------------------------------------------------

    def sync(self, force: bool = False) -> None:
        """Skip to a recovery point: past ``;``, past a balanced block, or
        before ``}``/a declaration keyword at the current nesting level."""
        depth = 0
        moved = False
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if depth == 0 and (moved or not force):
                if tok.kind == "punct" and tok.lexeme == "}":
                    return
                if self.is_decl_start():
                    return
            self.advance()
            moved = True
            if tok.kind != "punct":
                continue
            if tok.lexeme == "{":
                depth += 1
            elif tok.lexeme == "}":
                depth -= 1
                if depth <= 0:
                    return
            elif tok.lexeme == ";" and depth == 0:
                return

    def block(self, item: Callable[[], None]) -> None:
        self.expect("punct", "{")
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.lexeme == "}":
                self.advance()
                return
            if tok.kind == "eof":
                self.fail(tok, "expected '}', found end of input")
            if self.is_decl_start():
                self.error(tok, f"expected '}}' before {self.describe(tok)}")
                return
            try:
                item()
            except _Fail:
                self.sync()

    def build(self, tok: Token, make: Callable):
        try:
            return make()
        except NfrGaugeError as exc:
            self.fail(tok, str(exc))

    def declare(self, namespace: str, name: str, tok: Token) -> bool:
        key = (namespace, name)
        if key in self.positions:
            line, col = self.positions[key]
            self.error(tok, f"duplicate {namespace} {name!r} (first declared at {line}:{col})")
            return False
        self.positions[key] = (tok.line, tok.column)
        return True

    # -- grammar ---------------------------------------------------------

    def run(self) -> ParseResult:
        try:
            self.expect("keyword", "project", "'project'")
            self.project = self.expect("string", what="project name string").value
            self.expect("punct", "{")
        except _Fail:
            # resume at the first declaration or opening brace
            while not self.at("eof") and not self.is_decl_start():
                if self.advance().lexeme == "{":
                    break
        parsers = {
            "requirement": self.requirement,
            "mnfr": self.requirement,
            "snfr": self.requirement,
            "linguistic": self.linguistic,
            "scale": self.scale,
            "template": self.template,
            "softgoal": self.softgoal,
            "link": self.link,
        }
        closed = False
        while not self.at("eof"):
            tok = self.peek()
            if tok.kind == "punct" and tok.lexeme == "}":
                self.advance()
                closed = True
                break
            if not self.is_decl_start():
                self.error(tok, f"expected a declaration, found {self.describe(tok)}")
                self.sync(force=True)
                continue
            try:
                parsers[tok.lexeme]()
            except _Fail:
                self.sync()
        if not closed:
            self.error(self.peek(), "expected '}' to close the project, found end of input")
        elif not self.at("eof"):
            self.error(self.peek(), f"unexpected {self.describe(self.peek())} after the end of the project")

        self.resolve()
        spec = None
        if not any(d.severity == "error" for d in self.diags):
            spec = RequirementSpec(
                project=self.project,
                requirements=tuple(self.requirements),
                variables=tuple(self.variables),
                scales=tuple(self.scales),
                templates=tuple(self.templates),
                softgoals=tuple(self.softgoals),
                links=tuple(self.links),
                positions=dict(self.positions),
            )
        diags = sorted(self.diags, key=lambda d: (d.line, d.column))
        return ParseResult(spec, diags)

    def requirement(self) -> None:
        start = len(self.diags)
        kw = self.advance()
        kind = kw.lexeme
        rid_tok = self.expect("string", what="requirement id string")
        rid = rid_tok.value
        allowed = _FIELDS[kind]
        values: Dict[str, object] = {}
        toks: Dict[str, Token] = {}

        def field_item():
            key = self.peek()
            if key.kind not in ("keyword", "ident") or key.lexeme not in allowed:
                names = ", ".join(allowed)
                self.fail(key, f"expected one of {names} in {kind}, found {self.describe(key)}")
            self.advance()
            self.expect("punct", ":")
            vkind = allowed[key.lexeme]
            if vkind == "string":
                val = self.expect("string", what="string").value
            elif vkind == "ident":
                val = self.ident().lexeme
            elif vkind == "number":
                val = self.finite_number()[0]
            else:
                term = self.ident("term name").lexeme
                hedge = None
                if self.accept("punct", ":"):
                    h = self.peek()
                    if h.kind == "keyword" and h.lexeme in HEDGES:
                        hedge = Hedge(self.advance().lexeme)
                    else:
                        self.fail(h, f"expected a hedge (not, very, somewhat, slightly), found {self.describe(h)}")
                val = (term, hedge)
            self.expect("punct", ";")
            if key.lexeme in values:
                self.fail(key, f"field {key.lexeme} given twice")
            values[key.lexeme] = val
            toks[key.lexeme] = key

        self.block(field_item)
        if not self.declare("requirement", rid, rid_tok) or len(self.diags) > start:
            return
        statement = values.pop("statement", "")
        verification = self.verification(kind, kw, values, toks, rid)
        self.requirements.append(Requirement(rid, kind, statement, verification))

    def verification(self, kind, kw, values, toks, rid):
        agg = values.get("aggregator")
        if agg is not None and agg not in AGGREGATORS:
            self.error(toks["aggregator"], f"aggregator must be one of {', '.join(AGGREGATORS)}, got {agg}")
        if kind == "requirement":
            return BooleanCheck(values["verified_by"]) if "verified_by" in values else None
        if kind == "mnfr":
            missing = [k for k in ("metric", "threshold") if k not in values]
            if missing:
                self.error(kw, f"mnfr needs {' and '.join(missing)}")
                return None
            m = _THRESHOLD.match(values["threshold"])
            if not m:
                self.error(toks["threshold"], f"threshold {values['threshold']!r} is not '<comparator> <number> [unit]'")
                return None
            cmp, bound, unit = m.groups()
            bound = float(bound)
            if math.isinf(bound):
                self.error(toks["threshold"], "threshold bound must be finite")
            return MetricThreshold(values["metric"], _CANONICAL_CMP.get(cmp, cmp), bound, unit, agg)

        families = {
            "likert": [k for k in ("scale", "survey", "band") if k in values],
            "fuzzy": [k for k in ("variable", "input", "target") if k in values],
            "template": [k for k in ("template",) if k in values],
        }
        used = [f for f, ks in families.items() if ks]
        if len(used) > 1:
            self.error(kw, "snfr mixes " + " and ".join(used) + " assessment fields")
            return None
        if not used:
            if agg is not None:
                self.error(toks["aggregator"], "aggregator needs a fuzzy or template assessment")
            return None
        fam = used[0]
        if fam == "likert":
            if "scale" not in values:
                self.error(kw, "likert assessment needs scale")
                return None
            if agg is not None:
                self.error(toks["aggregator"], "aggregator does not apply to likert surveys")
            band = values.get("band")
            if band is not None and not 0.0 <= band <= 0.5:
                self.error(toks["band"], f"band {band} must lie in [0, 0.5]")
            self.refs.append(("scale", values["scale"], toks["scale"], "scale"))
            # the survey name defaults to the requirement id
            return LikertSurvey(values["scale"], values.get("survey", rid), band)
        if fam == "fuzzy":
            missing = [k for k in ("variable", "input", "target") if k not in values]
            if missing:
                self.error(kw, f"fuzzy assessment needs {' and '.join(missing)}")
                return None
            term, hedge = values["target"]
            self.refs.append(("variable", values["variable"], toks["variable"], "linguistic variable"))
            self.refs.append(("term", (values["variable"], term), toks["target"], "term"))
            return FuzzyAssessment(values["variable"], values["input"], term, hedge, agg)
        self.refs.append(("template", values["template"], toks["template"], "template"))
        return TemplateAssessment(values["template"], agg)

    def shape(self):
        kw = self.peek()
        if kw.kind != "keyword" or kw.lexeme not in ("triangle", "trapezoid", "interval"):
            self.fail(kw, f"expected triangle, trapezoid or interval, found {self.describe(kw)}")
        self.advance()
        if kw.lexeme == "interval":
            opening = self.peek()
            if not (opening.kind == "punct" and opening.lexeme in "(["):
                self.fail(opening, f"expected '(' or '[', found {self.describe(opening)}")
            self.advance()
            lo = self.number()[0]
            self.expect("punct", ",")
            hi = self.number()[0]
            closing = self.peek()
            if not (closing.kind == "punct" and closing.lexeme in ")]"):
                self.fail(closing, f"expected ')' or ']', found {self.describe(closing)}")
            self.advance()
            return self.build(kw, lambda: CrispInterval(lo, hi, opening.lexeme == "[", closing.lexeme == "]"))
        self.expect("punct", "(")
        nums = [self.number()[0]]
        while self.accept("punct", ","):
            nums.append(self.number()[0])
        self.expect("punct", ")")
        arity = 3 if kw.lexeme == "triangle" else 4
        if len(nums) != arity:
            self.fail(kw, f"{kw.lexeme} takes {arity} parameters, got {len(nums)}")
        cls = Triangular if arity == 3 else Trapezoidal
        return self.build(kw, lambda: cls(*nums))

    def linguistic(self) -> None:
        start = len(self.diags)
        kw = self.advance()
        name_tok = self.ident("variable name")
        self.expect("keyword", "over", "'over'")
        unit_tok = self.name_or_string("unit")
        unit = unit_tok.value if unit_tok.kind == "string" else unit_tok.lexeme
        domain = None
        if self.accept("keyword", "domain"):
            self.expect("punct", "(")
            lo = self.number()[0]
            self.expect("punct", ",")
            hi = self.number()[0]
            self.expect("punct", ")")
            domain = (lo, hi)
        terms = []

        def term():
            self.expect("keyword", "term", "'term'")
            t = self.ident("term name")
            self.expect("punct", ":")
            mf = self.shape()
            self.expect("punct", ";")
            terms.append((t.lexeme, mf))

        self.block(term)
        if not self.declare("linguistic variable", name_tok.lexeme, name_tok) or len(self.diags) > start:
            return
        self.variables.append(
            self.build(kw, lambda: LinguisticVariable(name_tok.lexeme, tuple(terms), unit, domain)))

    def scale(self) -> None:
        start = len(self.diags)
        kw = self.advance()
        name_tok = self.ident("scale name")
        if self.accept("keyword", "standard"):
            points, ptok = self.finite_number("point count")
            self.expect("punct", ";")
            if not float(points).is_integer():
                self.fail(ptok, "point count must be an integer")
            sc = self.build(ptok, lambda: standard_scale(int(points), name_tok.lexeme))
        else:
            cats = []

            def option():
                self.expect("keyword", "option", "'option'")
                label = self.expect("string", what="option label string").value
                value, vtok = self.finite_number("option value")
                self.expect("punct", ";")
                if not float(value).is_integer():
                    self.fail(vtok, "option values must be integers")
                cats.append((label, int(value)))

            self.block(option)
            if len(self.diags) > start:
                self.declare("scale", name_tok.lexeme, name_tok)
                return
            sc = self.build(kw, lambda: LikertScale(name_tok.lexeme, tuple(cats)))
        if self.declare("scale", sc.name, name_tok):
            self.scales.append(sc)

    def template(self) -> None:
        start = len(self.diags)
        kw = self.advance()
        name_tok = self.ident("template name")
        subs, rows = [], []

        def item():
            tok = self.peek()
            if self.accept("keyword", "sub"):
                sname = self.ident("sub-NFR name")
                self.expect("keyword", "weight", "'weight'")
                weight, wtok = self.finite_number("weight")
                rng = None
                if self.accept("keyword", "range"):
                    self.expect("punct", "(")
                    lo = self.number()[0]
                    self.expect("punct", ",")
                    hi = self.number()[0]
                    self.expect("punct", ")")
                    rng = (lo, hi)
                levels = []

                def level():
                    self.expect("keyword", "level", "'level'")
                    lname = self.ident("level name")
                    self.expect("punct", ":")
                    mf = self.shape()
                    self.expect("punct", ";")
                    levels.append(Level(lname.lexeme, mf))

                self.block(level)
                subs.append(self.build(sname, lambda: SubNfr(sname.lexeme, weight, tuple(levels), rng)))
            elif self.accept("keyword", "status"):
                st = self.name_or_string("status name")
                status = st.value if st.kind == "string" else st.lexeme
                self.expect("punct", ":")
                lvls = [self.ident("level name").lexeme]
                while self.accept("punct", ","):
                    lvls.append(self.ident("level name").lexeme)
                self.expect("punct", ";")
                rows.append(StatusRow(status, tuple(lvls)))
            else:
                self.fail(tok, f"expected 'sub' or 'status', found {self.describe(tok)}")

        self.block(item)
        if not self.declare("template", name_tok.lexeme, name_tok) or len(self.diags) > start:
            return
        self.templates.append(
            self.build(kw, lambda: WeightedTemplate(name_tok.lexeme, tuple(subs), tuple(rows))))

    def softgoal(self) -> None:
        self.advance()
        name_tok = self.ident("soft-goal name")
        threshold = None
        if self.accept("keyword", "threshold"):
            threshold, ttok = self.finite_number("threshold")
            if not 0.0 <= threshold <= 1.0:
                self.error(ttok, f"threshold {threshold} must lie in [0, 1]")
        children = []

        def child():
            self.expect("keyword", "weight", "'weight'")
            weight, wtok = self.finite_number("weight")
            if not weight > 0:
                self.error(wtok, f"weight {weight} must be positive")
            if self.accept("keyword", "subgoal"):
                ref = self.ident("soft-goal name")
                self.refs.append(("softgoal", ref.lexeme, ref, "soft goal"))
                children.append(GoalChild(weight, "subgoal", ref.lexeme))
            elif self.accept("keyword", "leaf"):
                ref = self.expect("string", what="requirement id string")
                self.refs.append(("requirement", ref.value, ref, "requirement"))
                children.append(GoalChild(weight, "leaf", ref.value))
            else:
                self.fail(self.peek(), f"expected 'subgoal' or 'leaf', found {self.describe(self.peek())}")
            self.expect("punct", ";")

        self.block(child)
        if self.declare("soft goal", name_tok.lexeme, name_tok):
            self.softgoals.append(SoftGoalDecl(name_tok.lexeme, threshold, tuple(children)))

    def link(self) -> None:
        kw = self.advance()
        src = self.ident("link source")
        self.expect("punct", "->")
        dst = self.ident("link target")
        self.expect("keyword", "sign", "'sign'")
        sign, stok = self.finite_number("sign")
        self.expect("punct", ";")
        lk = self.build(stok, lambda: ContributionLink(src.lexeme, dst.lexeme, sign))
        self.positions[("link", len(self.links))] = (kw.line, kw.column)
        self.refs.append(("link-source", src.lexeme, src, "link source"))
        self.refs.append(("softgoal", dst.lexeme, dst, "soft goal"))
        self.links.append(lk)

    # -- name resolution -------------------------------------------------

    def resolve(self) -> None:
        declared = {}
        for ns, name in self.positions:
            declared.setdefault(ns, set()).add(name)
        names = {
            "scale": declared.get("scale", set()),
            "variable": declared.get("linguistic variable", set()),
            "template": declared.get("template", set()),
            "softgoal": declared.get("soft goal", set()),
            "requirement": declared.get("requirement", set()),
        }
        names["link-source"] = names["softgoal"] | names["requirement"]
        variables = {v.name: v for v in self.variables}
        for ns, name, tok, what in self.refs:
            if ns == "term":
                var, term = name
                if var in variables and term not in variables[var].term_names:
                    self.error(tok, f"variable {var} has no term {term!r}")
                continue
            if name not in names[ns]:
                self.error(tok, f"undefined {what} {name!r}")
