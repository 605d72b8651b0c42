"""
Exception hierarchy for domkit.

Predicates never raise for a negative answer; they return a report. The
exceptions below cover malformed input, violated preconditions and
enumeration guards.
"""

from typing import Any, Optional


class DomkitError(Exception):
    """Base class for all domkit errors."""

    exit_status = 1


class InputError(DomkitError):
    """The caller handed over something that is not a valid input."""

    exit_status = 2


class UnknownElementError(InputError):
    """An element referenced by the caller is not part of the poset."""

    def __init__(self, element: Any, where: str = ""):
        self.element = element
        self.where = where
        suffix = f" of {where}" if where else ""
        super().__init__(f"unknown element {element}{suffix}")


class TermSyntaxError(InputError):
    """A term string does not follow the canonical term grammar."""

    def __init__(self, message: str, text: str, column: int):
        self.text = text
        self.column = column
        super().__init__(f"{message} at column {column} in {text!r}")


class BasisFormatError(InputError):
    """A basis document could not be decoded."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line else ""
        super().__init__(f"{message}{location}")


class AxiomViolationError(InputError):
    """The order relation of an input fails the partial-order axioms."""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"{report.predicate} violated: {report.reason}")


class PreconditionError(InputError):
    """An operation was called outside its documented precondition."""


class NotFinitaryBasisError(PreconditionError):
    """An operation that needs a finitary basis got something else."""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"not a finitary basis: {report.reason}")


class CapExceededError(DomkitError):
    """An exhaustive scan or construction would exceed a configured cap."""

    exit_status = 3

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: size {size} exceeds cap {limit}")


class CardinalityCapError(CapExceededError):
    """A domain constructor would produce more elements than allowed."""

    def __init__(self, step: str, size: int, limit: int):
        self.step = step
        super().__init__(f"constructor step '{step}'", size, limit)


class CoopCapError(CardinalityCapError):
    """A COOP iteration blew the cardinality cap; carries the completed prefix."""

    def __init__(self, cause: CardinalityCapError, trace: Any):
        self.trace = trace
        self.cause = cause
        super().__init__(cause.step, cause.size, cause.limit)


class NoContainingMappingError(DomkitError):
    """No approximable mapping contains the given seed.

    Raised when closing under pairwise lubs would need the lub of two
    target elements that have none.
    """

    def __init__(self, witness: tuple, reason: Optional[str] = None):
        self.witness = witness
        source, first, second = witness
        super().__init__(
            reason
            or f"no lub for {first} and {second} required at source element {source}"
        )
