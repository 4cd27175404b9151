"""Exception hierarchy shared across the pipeline; exit codes per class."""
from __future__ import annotations


class PipelineError(Exception):
    """Base class; exit_code drives the CLI process status."""

    exit_code = 1


class ConfigError(PipelineError):
    """Bad flag, config value, or cross-field constraint violation."""

    exit_code = 2


class DataError(PipelineError):
    """Malformed or inconsistent input data."""

    exit_code = 3


class SchemaVersionError(DataError):
    """Input file declares a schema_version this reader does not speak."""


class MissingEmbeddingError(DataError):
    """Phrases referenced by tuples lack sidecar embeddings."""

    def __init__(self, phrase_ids):
        self.phrase_ids = sorted(phrase_ids)
        shown = ", ".join(self.phrase_ids[:5])
        more = "" if len(self.phrase_ids) <= 5 else f" (+{len(self.phrase_ids) - 5} more)"
        super().__init__(f"missing embeddings for: {shown}{more}")


class InternalInvariantError(PipelineError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 4
