"""Exception taxonomy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP layer
can map exceptions to documented API error bodies without string matching.
"""

from __future__ import annotations


class AssetCatError(Exception):
    """Base class for all domain errors."""

    code = "internal_error"

    def __init__(self, message: str, field_errors: dict[str, str] | None = None):
        super().__init__(message)
        self.message = message
        self.field_errors = field_errors or {}


class ParseError(AssetCatError):
    """A structured document failed to parse; carries line/position context."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(AssetCatError):
    code = "validation_error"


class MissingDocumentation(AssetCatError):
    """Asset has no card text; it is skipped, never catalogued."""

    code = "missing_documentation"


class InsufficientContext(AssetCatError):
    """A task has no non-ambiguous members to build an outlier centroid from."""

    code = "insufficient_context"


class MalformedMetadata(AssetCatError):
    """Evaluation block present but not a valid model-index document."""

    code = "malformed_metadata"


class UnknownFilterValue(AssetCatError):
    """Leaderboard query names a benchmark or metric absent from the catalogue."""

    code = "unknown_filter_value"


class InvalidQuery(AssetCatError):
    code = "invalid_query"


class UnsupportedFormat(AssetCatError):
    code = "unsupported_format"


class ProviderUnavailable(AssetCatError):
    code = "provider_unavailable"


class RateBudgetExhausted(AssetCatError):
    """No request permit available without waiting."""

    code = "rate_budget_exhausted"

    def __init__(self, message: str, retry_after: float = 0.0):
        super().__init__(message)
        self.retry_after = retry_after


class ConstraintViolation(AssetCatError):
    code = "constraint_violation"


class StoreUnavailable(AssetCatError):
    code = "store_unavailable"


class MigrationConflict(AssetCatError):
    code = "migration_conflict"


class DuplicateEmail(AssetCatError):
    code = "duplicate_email"


class InvalidCredentials(AssetCatError):
    code = "invalid_credentials"


class NotFound(AssetCatError):
    code = "not_found"


class Forbidden(AssetCatError):
    code = "forbidden"


class Unauthenticated(AssetCatError):
    code = "unauthenticated"
