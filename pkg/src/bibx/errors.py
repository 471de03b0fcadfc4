"""Exception types shared across the toolkit.

Exit-code mapping (see cli): UsageError -> 1, data errors -> 2,
ServiceError -> 3.
"""


class BibxError(Exception):
    """Base class for all toolkit errors."""


class UsageError(BibxError):
    """Bad arguments, unknown option values, out-of-range parameters."""


class DataError(BibxError):
    """Malformed or missing input data."""


class ParseError(DataError):
    """Positioned parse failure in a raw export file."""

    def __init__(self, message, offset=None, line=None):
        self.offset = offset
        self.line = line
        where = ""
        if line is not None:
            where = f" at line {line}"
        elif offset is not None:
            where = f" at offset {offset}"
        super().__init__(f"{message}{where}")


class EmptyCorpusError(DataError):
    """A filter or merge produced zero documents."""


class AnalysisUnavailableError(DataError):
    """Not enough usable data for the requested analysis."""


class ConfigurationError(BibxError):
    """Missing or invalid configuration (e.g. no API key)."""


class ServiceError(BibxError):
    """The external LLM service failed or misbehaved."""

    def __init__(self, message, status=None):
        self.status = status
        super().__init__(message)
