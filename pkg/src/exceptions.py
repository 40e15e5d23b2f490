#!/usr/bin/env python3
"""
Error hierarchy for the heavy-tail framework

Every error raised on purpose by the library derives from HeavyTailError and
from the closest builtin exception, so callers that only catch ValueError or
OverflowError keep working. Each error carries an exit code used by the CLI
and a details mapping that ends up in the machine-readable error object.
"""

from typing import Any, Dict

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class HeavyTailError(Exception):
    """Base class for all framework errors"""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self) -> str:
        return self.message

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable error object"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": {key: _plain(value) for key, value in self.details.items()},
        }


class DomainError(HeavyTailError, ValueError):
    """Argument outside the mathematical domain of an operation"""

    exit_code = EXIT_DATA


class InsufficientDataError(HeavyTailError, ValueError):
    """Too few observations for the requested estimate"""

    exit_code = EXIT_DATA


class DegenerateDataError(HeavyTailError, ValueError):
    """Data without spread (zero variance)"""

    exit_code = EXIT_DATA


class IngestionError(HeavyTailError, ValueError):
    """Input file cannot be turned into a series; `row` names the offending line"""

    exit_code = EXIT_DATA


class OverflowGuardError(HeavyTailError, OverflowError):
    """An exponent left the representable range; `x` is where it happened"""

    exit_code = EXIT_NUMERICAL


class CapabilityError(HeavyTailError, NotImplementedError):
    """Operation not supported for this family or object"""

    exit_code = EXIT_USAGE


class InitializationError(HeavyTailError, ValueError):
    """Objective is not finite at the starting point; `parameter` names the culprit"""

    exit_code = EXIT_NUMERICAL


class BinDegeneracyError(HeavyTailError, ValueError):
    """A chi-square bin has (numerically) zero expected count"""

    exit_code = EXIT_NUMERICAL


class ConstructionError(HeavyTailError, ValueError):
    """Tail-matching construction precondition failed; `witness` is the x found"""

    exit_code = EXIT_NUMERICAL


class ScenarioError(HeavyTailError, KeyError):
    """Unknown verification scenario name"""

    exit_code = EXIT_USAGE


class UsageError(HeavyTailError, ValueError):
    """Flags or arguments that do not make a valid request"""

    exit_code = EXIT_USAGE


class OutputError(HeavyTailError, OSError):
    """Report or table could not be written; `path` names the target"""

    exit_code = EXIT_USAGE


def _plain(value: Any) -> Any:
    """Coerce numpy scalars and tuples to JSON-friendly values"""
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        try:
            return value.item()
        except (TypeError, ValueError):
            return str(value)
    return value
