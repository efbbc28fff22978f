"""The ``.nfr`` requirements language: lexer, parser, serializer and validator."""
from .lexer import Token, tokenize
from .model import (
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
from .parser import Diagnostic, ParseResult, parse
from .serializer import serialize
from .validate import validate

__all__ = [
    "BooleanCheck",
    "Diagnostic",
    "FuzzyAssessment",
    "GoalChild",
    "LikertSurvey",
    "MetricThreshold",
    "ParseResult",
    "Requirement",
    "RequirementSpec",
    "SoftGoalDecl",
    "TemplateAssessment",
    "Token",
    "parse",
    "serialize",
    "tokenize",
]
