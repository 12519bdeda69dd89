"""Exception hierarchy for the goldmedal catalog engine.

Every error carries a stable ``code`` (the class name) used by the CLI's
machine-readable output.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .model import ValidationReport


class GoldmedalError(Exception):
    """Base class for all engine errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- model construction -----------------------------------------------------

class EmptyName(GoldmedalError):
    pass


class MalformedProperty(GoldmedalError):
    def __init__(self, message: str, label: str | None = None):
        super().__init__(message if label is None else f"property {label!r}: {message}")
        self.label = label


class MixedEndpoints(GoldmedalError):
    pass


class SelfLoop(GoldmedalError):
    pass


class KindMismatch(GoldmedalError):
    pass


class EmptyOutputs(GoldmedalError):
    pass


class InputOutputOverlap(GoldmedalError):
    pass


# --- store ------------------------------------------------------------------

class StoreNotFound(GoldmedalError):
    pass


class StoreExists(GoldmedalError):
    pass


class CorruptSnapshot(GoldmedalError):
    pass


class VersionUnsupported(GoldmedalError):
    pass


class NotFound(GoldmedalError):
    pass


class ReferencedByOthers(GoldmedalError):
    def __init__(self, target: str, referrers: list[str]):
        super().__init__(f"{target} is referenced by: {', '.join(referrers)}")
        self.target = target
        self.referrers = referrers


class IntegrityViolation(GoldmedalError):
    def __init__(self, report: "ValidationReport"):
        lines = "; ".join(f"{v.rule}({v.subject}): {v.message}" for v in report.violations)
        super().__init__(lines or "integrity violation")
        self.report = report


class IoFailure(GoldmedalError):
    pass


# --- query ------------------------------------------------------------------

class QuerySyntaxError(GoldmedalError):
    """Raised by the DSL parser; reports position and the expected token set."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...], found: str):
        super().__init__(f"{line}:{column}: {message} (expected {', '.join(expected)}; found {found})")
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found


class UnknownId(GoldmedalError):
    pass


class UnknownGrouping(GoldmedalError):
    pass


# --- interchange ------------------------------------------------------------

class ParseError(GoldmedalError):
    pass


class SchemaError(GoldmedalError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# --- ingestion --------------------------------------------------------------

class Unreadable(GoldmedalError):
    def __init__(self, path: str, message: str = "unreadable"):
        super().__init__(f"{path}: {message}")
        self.path = path


class HeaderError(GoldmedalError):
    pass


class RowError(GoldmedalError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# --- conformance ------------------------------------------------------------

class MissingAssignment(GoldmedalError):
    pass


class SelfContainment(GoldmedalError):
    pass


class EmptyVersionChain(GoldmedalError):
    pass
