"""Exception types shared across the package."""

from __future__ import annotations


class ShipRiskError(Exception):
    """Base class for every domain error raised by this package."""


class JudgmentError(ShipRiskError, ValueError):
    """A set of elicited judgments violates its structural rules.

    Carries the consistency violations (if any) that triggered it, so
    service layers can return them verbatim.
    """

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class EvaluationError(ShipRiskError, ValueError):
    """A value function was asked about a level or number it cannot score."""


class MissingReferenceError(ShipRiskError, LookupError):
    """A fleet lookup (company, flag, RO) has no entry in the reference lists."""

    def __init__(self, message: str, *, ship=None, criterion=None, token=None):
        super().__init__(message)
        self.ship = ship
        self.criterion = criterion
        self.token = token


class ParseError(ShipRiskError, ValueError):
    """Malformed input file; locates the offending cell when possible."""

    def __init__(self, message: str, *, source=None, line=None, column=None):
        self.source = source
        self.line = line
        self.column = column
        prefix = ""
        if source is not None:
            prefix = str(source)
        if line is not None:
            prefix += f":{line}"
            if column is not None:
                prefix += f":{column}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class SchemaError(ShipRiskError, ValueError):
    """A structured document does not match the expected schema or version."""


class IncompleteSessionError(ShipRiskError, ValueError):
    """An operation needs judgments the session does not hold yet."""
