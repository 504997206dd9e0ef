"""Exception hierarchy

Every error carries the CLI exit code and the HTTP status it maps to.
Coefficient mismatches are not errors: they are reported as data.
"""
from typing import Optional, Tuple


EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class LagrangeGoodError(Exception):
    exit_code: int = EXIT_USAGE
    http_status: int = 400


# Series arithmetic

class SeriesError(LagrangeGoodError):
    pass


class VariableCountMismatch(SeriesError):
    pass


class IndexOutOfRange(SeriesError):
    pass


class InvalidOrder(SeriesError):
    pass


class BeyondTruncation(SeriesError):
    """Coefficient requested above the truncation order (unknown, not zero)"""


class NotInvertible(SeriesError):
    """Zero constant term: no reciprocal in the power-series ring"""


class CompositionError(SeriesError):
    pass


# Expressions

class ExpressionError(LagrangeGoodError):
    http_status = 422


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, source: str, position: int):
        self.source = source
        self.position = position
        self.line, self.column = _line_column(source, position)
        super().__init__(f"{message} at line {self.line}, column {self.column}")


class UnknownVariable(ExpressionSyntaxError):
    pass


class InvalidExponent(ExpressionSyntaxError):
    pass


class LoweringError(ExpressionError):
    def __init__(self, message: str, span: Tuple[int, int], source: Optional[str] = None):
        self.span = span
        self.source = source
        snippet = f" '{source[span[0]:span[1]]}'" if source else ""
        super().__init__(f"{message} (span {span[0]}..{span[1]}{snippet})")


# Run configuration

class ConfigError(LagrangeGoodError):
    http_status = 422


# Analytic oracle

class ContractionError(LagrangeGoodError):
    exit_code = EXIT_NUMERIC
    http_status = 422


class NonConvergence(ContractionError):
    pass


class NearSingular(ContractionError):
    pass


class EpsilonExhausted(ContractionError):
    pass


def _line_column(source: str, position: int) -> Tuple[int, int]:
    before = source[:position]
    line = before.count("\n") + 1
    column = position - (before.rfind("\n") + 1) + 1
    return line, column
