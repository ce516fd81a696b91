"""Exception hierarchy shared across the engine.

Every error that reaches the CLI or HTTP layer derives from CorpexError so
those layers can map domain failures to exit code 2 / structured responses
without enumerating causes.
"""


class CorpexError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message)
        self.field = field


class IngestError(CorpexError):
    """Raised for unreadable/malformed corpus sources or bad ingest options."""

    code = "ingest_error"


class DuplicateIdError(IngestError):
    code = "duplicate_id"


class BundleError(CorpexError):
    """Raised for invalid, corrupt, or incomplete bundles."""

    code = "bundle_error"


class UnknownDocumentError(CorpexError):
    code = "unknown_document"


class UnknownSpaceError(CorpexError):
    code = "unknown_space"


class UnknownMetricError(CorpexError):
    code = "unknown_metric"


class EmptyRegionError(CorpexError):
    """The selection geometry contains no documents."""

    code = "empty_region"


class OutOfRangeError(CorpexError):
    """A grid cell or similar index lies outside its valid range."""

    code = "out_of_range"


class EmptyQueryError(CorpexError):
    """No stems survive tokenization of the query text."""

    code = "empty_query"


class ConfigMismatchError(CorpexError):
    """A request exceeds what was precomputed (e.g. n > k)."""

    code = "config_mismatch"


class UnsupportedOperationError(CorpexError):
    code = "unsupported_operation"
