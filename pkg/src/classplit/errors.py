"""Exception and warning types shared across the package."""

from __future__ import annotations


class ClasssplitError(Exception):
    """Base class for all package-specific errors."""


class ParseError(ClasssplitError):
    """Raised when Java source cannot be lexed or structurally parsed.

    Carries the 1-based line and column of the offending position when known.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}" + (f", col {col})" if col is not None else ")")
        super().__init__(message)


class UnsupportedConstruct(ClasssplitError):
    """Raised when a source file contains no analyzable top-level class."""


class SchemaError(ClasssplitError):
    """Raised when serialized facts or partitions violate the JSON schema.

    ``path`` is a dotted/indexed path such as ``methods[3].internal_calls``.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class EmptyCorpus(ClasssplitError):
    """Raised when a corpus directory or manifest yields no classes."""


class MissingMethod(ClasssplitError, IndexError):
    """Raised when a method id referenced somewhere does not exist.

    Doubles as an IndexError since the id is an out-of-range index.
    """

    def __init__(self, method_id: int, context: str = ""):
        self.method_id = method_id
        msg = f"unknown method id {method_id}"
        super().__init__(f"{msg} in {context}" if context else msg)


class DimensionMismatch(ClasssplitError):
    """Raised when matrix or vector shapes disagree with the method count."""


class WeightError(ClasssplitError):
    """Raised for negative combination weights or weights that sum to zero."""


class TooFewMethods(ClasssplitError):
    """Raised when a class has fewer methods than a split could ever use."""


class NoClusters(ClasssplitError):
    """Raised when density clustering marks every method as noise."""


class NonFiniteLoss(ClasssplitError):
    """Raised when training produces NaN or infinite loss."""

    def __init__(self, epoch: int, value: float):
        self.epoch = epoch
        self.value = value
        super().__init__(f"non-finite loss {value!r} at epoch {epoch}")


class ConfigError(ClasssplitError):
    """Raised for malformed harness configuration files."""


class NetworkError(ClasssplitError):
    """Raised when a corpus download fails outright."""


class ChecksumMismatch(ClasssplitError):
    """Raised when a downloaded file does not match its pinned checksum."""


class ModelUnavailable(ClasssplitError):
    """Raised when imported embedding vectors are requested but absent."""


class DegenerateGraph(UserWarning):
    """Warning category for edgeless or fully-connected method graphs."""


class ParseQualityWarning(UserWarning):
    """Warning category for constructs the parser skipped or approximated."""
