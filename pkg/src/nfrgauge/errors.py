"""Exception hierarchy shared by every nfrgauge module."""


class NfrGaugeError(Exception):
    """Base class for all errors raised by nfrgauge."""


class ValidationError(NfrGaugeError, ValueError):
    """A value object was constructed with parameters that break its invariants."""


class ArgumentError(NfrGaugeError, ValueError):
    """An argument is empty, non-positive or otherwise unusable."""


class DomainError(NfrGaugeError, ValueError):
    """A numeric input lies outside the declared domain of a variable."""


class CoverageError(NfrGaugeError, ValueError):
    """A value falls into no grading level of a template."""


class LookupFailure(NfrGaugeError, KeyError):
    """A named item (label, term, sub-NFR, ...) does not exist."""

    def __str__(self) -> str:
        # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class CompletenessError(NfrGaugeError, ValueError):
    """A respondent's answers do not cover the survey key exactly."""

    def __init__(self, message: str, missing=(), extra=()):
        super().__init__(message)
        self.missing = tuple(missing)
        self.extra = tuple(extra)


class ConsistencyError(NfrGaugeError, ValueError):
    """Inputs that must describe the same survey or series disagree."""


class GoalGraphError(NfrGaugeError, ValueError):
    """Base class for soft-goal forest problems."""


class CycleError(GoalGraphError):
    def __init__(self, path):
        self.path = tuple(path)
        super().__init__("cycle in soft-goal decomposition: " + " -> ".join(self.path + self.path[:1]))


class GoalReferenceError(GoalGraphError):
    """Dangling, duplicated or multiply-parented child reference."""


class IngestError(NfrGaugeError, ValueError):
    def __init__(self, message: str, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class LabelError(IngestError):
    def __init__(self, message: str, path=None, line=None, suggestion=None):
        self.suggestion = suggestion
        if suggestion is not None:
            message += f' (did you mean "{suggestion}"?)'
        super().__init__(message, path, line)


class DuplicateResponseError(IngestError):
    pass


class EmptyInputError(IngestError):
    pass


class DataError(NfrGaugeError):
    """Evaluation data is missing or bound to the wrong requirement."""


class LexError(NfrGaugeError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")
