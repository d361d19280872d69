"""Exceptions raised by rolltree.

All domain errors derive from ``ValueError`` so callers that only guard
against bad input keep working.
"""


class RollTreeError(ValueError):
    """Base class for rolltree errors."""


class DatasetError(RollTreeError):
    """Raised when an input table cannot be turned into a dataset."""


class SchemaMismatchError(RollTreeError):
    """Raised when records do not match a fitted binarization schema."""


class ModelFormatError(RollTreeError):
    """Raised when a model document is malformed."""


class OracleLimitError(RollTreeError):
    """Raised when a brute-force oracle is asked to enumerate too much."""
