"""Exception hierarchy shared by all clustopt modules.

Every domain error carries a short machine-readable ``code`` so the CLI can
emit stable single-line diagnostics.
"""

from __future__ import annotations


class ClustoptError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class SelfLoopError(ClustoptError):
    code = "self-loop"


class DuplicateEdgeError(ClustoptError):
    code = "duplicate-edge"


class NonPositiveWeightError(ClustoptError):
    code = "non-positive-weight"


class IndexOutOfRangeError(ClustoptError):
    code = "index-out-of-range"


class InvalidRangeError(ClustoptError):
    code = "invalid-range"


class PreconditionError(ClustoptError):
    code = "precondition-violated"


class InsufficientDataError(ClustoptError):
    code = "insufficient-data"


class InvalidParamsError(ClustoptError):
    code = "invalid-params"


class DisconnectedError(ClustoptError):
    code = "disconnected"


class ConvergenceError(ClustoptError):
    code = "convergence-failure"


class DimensionMismatchError(ClustoptError):
    code = "dimension-mismatch"


class NotSymmetricError(ClustoptError):
    code = "not-symmetric"


class SizeLimitError(ClustoptError):
    code = "size-limit-exceeded"


class AllZeroError(ClustoptError):
    code = "all-zero-spectrum"


class SamplerError(ClustoptError):
    code = "sampler-failure"


class BracketError(ClustoptError):
    code = "bracket-failure"


class DivergenceError(ClustoptError):
    code = "numerical-divergence"


class MalformedLineError(ClustoptError):
    code = "malformed-line"

    def __init__(self, line_number: int, line: str, reason: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {reason}: {line!r}")


class EmptyGraphError(ClustoptError):
    code = "empty-graph"


class GraphParseError(ClustoptError):
    code = "parse-error"


class VersionMismatchError(ClustoptError):
    code = "version-mismatch"
