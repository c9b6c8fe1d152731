"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class AnalysisError(Exception):
    """Base class for all errors raised while analysing a program."""


class FrontendError(AnalysisError):
    """Error tied to a position in a source file."""

    kind = "error"

    def __init__(self, message: str, span=None):
        self.message = message
        self.span = span
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.span is None:
            return f"{self.kind}: {self.message}"
        return f"{self.span}: {self.kind}: {self.message}"


class LexError(FrontendError):
    kind = "lexical error"


class ParseError(FrontendError):
    kind = "syntax error"


class UnsupportedConstructError(FrontendError):
    """The input is valid C but falls outside the supported subset."""

    kind = "unsupported construct"


class MissingTripCountError(AnalysisError):
    """A loop has neither a static bound nor a profile entry."""

    def __init__(self, key: str, span=None, path: str = ""):
        self.key = key
        self.span = span
        self.path = path
        where = f" ({span})" if span is not None else ""
        via = f" via {path}" if path else ""
        super().__init__(f"unknown trip count for loop {key}{where}{via}; add it to the profile")


class ProbabilityError(AnalysisError, ValueError):
    """Branch probabilities out of range or not summing to one."""


class GraphCycleError(AnalysisError):
    """A data-flow graph that must be acyclic contains a cycle."""


class GraphTooLargeError(AnalysisError):
    """Flattening exceeded the configured node cap."""


class ConfigError(AnalysisError):
    """A cost table, profile or thresholds file is malformed."""


class FormatError(AnalysisError, ValueError):
    """Unsupported output format token."""
