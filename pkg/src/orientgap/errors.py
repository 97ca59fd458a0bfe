"""Exception hierarchy shared by every module.

The CLI maps any :class:`ReductionError` to exit status 1 and prints the
class name, so names here are part of the user-facing surface.
"""

from __future__ import annotations


class ReductionError(Exception):
    """Base class for every error raised by orientgap."""


# -- instances ---------------------------------------------------------------

class InstanceError(ReductionError, ValueError):
    """An instance violates a structural invariant."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, col {column}"
            message = f"{where}: {message}"
        super().__init__(message)


class InstanceSyntaxError(InstanceError):
    pass


class DuplicateAdjacency(InstanceError):
    pass


class IndexOutOfRange(InstanceError):
    pass


class EmptyTerminals(InstanceError):
    pass


class SelfLoop(InstanceError):
    pass


class LengthMismatch(ReductionError, ValueError):
    pass


class BudgetExceeded(ReductionError, ValueError):
    pass


class BadIndex(ReductionError, IndexError):
    pass


# -- oracles -----------------------------------------------------------------

class TooLarge(ReductionError):
    """The exhaustive search space exceeds the configured cap."""


class OracleTooLarge(TooLarge):
    pass


# -- sampler -----------------------------------------------------------------

class ZeroDelta(ReductionError, ValueError):
    pass


class DomainTooLarge(ReductionError):
    pass


class CapExceeded(ReductionError):
    pass


class NotFound(ReductionError):
    pass


# -- reductions --------------------------------------------------------------

class QTooSmall(ReductionError, ValueError):
    pass


class TupleOutOfRange(ReductionError, ValueError):
    pass


class NotFullySatisfying(ReductionError, ValueError):
    pass


class NotFourPairs(ReductionError, ValueError):
    pass


class NotFullySeparating(ReductionError, ValueError):
    pass


class NotAcyclic(ReductionError, ValueError):
    pass


class NotAPath(ReductionError, ValueError):
    pass


class NotAClique(ReductionError, ValueError):
    pass


class PartMissing(ReductionError, ValueError):
    pass
