# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Exception hierarchy shared by every acc_treekit module."""


class AccTreekitError(Exception):
    """Base class for all toolkit errors."""


class TreebankParseError(AccTreekitError, ValueError):
    """Malformed bracketed input; carries the offending line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class LabelError(AccTreekitError, ValueError):
    """A node label that cannot be decomposed or is invalid."""


class InvalidPathError(AccTreekitError, LookupError):
    """A child-index path that does not address a node."""


class NotACandidateError(AccTreekitError):
    """classify() was called on a node that is not an ACC candidate."""


class FlattenError(AccTreekitError):
    """Gap-S flattening requested on a clause with an overt subject."""


class AccLabelError(AccTreekitError):
    """Cluster or coordination label cannot be computed for a signature."""

    def __init__(self, message: str, code: str = "UNLABELABLE"):
        super().__init__(f"{code}: {message}")
        self.code = code


class TransformError(AccTreekitError):
    """transform_instance() called on a rejected instance."""


class MalformedAccError(AccTreekitError):
    """An ACCPH/ACC_ node whose children do not match its label."""


class GoldFormatError(AccTreekitError, ValueError):
    """Malformed coordination gold annotation."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class TokenMismatchError(AccTreekitError):
    """Gold and predicted sentences do not share a token sequence."""


class EmptyCorpusError(AccTreekitError):
    """An operation that needs data was given an empty corpus."""


class InvariantViolation(AccTreekitError):
    """An internal invariant failed; signals a bug rather than bad input."""


class GrammarFormatError(AccTreekitError, ValueError):
    """A grammar file that does not hold a valid, normalised PCFG."""
