"""Exception hierarchy.

Errors are grouped so the command line can map them to exit codes:
parse problems, validation of the mathematical input, and internal
consistency failures (a cross-check or relation that should hold did not).
"""


class HodgeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HodgeError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(HodgeError):
    """The input is well formed but mathematically unsuitable."""


class ConsistencyError(HodgeError):
    """Two routes that must agree did not; indicates a bug or a bad input."""


class ZeroVector(ValidationError):
    pass


class NotFullDimensional(ValidationError):
    pass


class NotReflexive(ValidationError):
    pass


class EmptyFace(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotComparable(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class NotNef(ValidationError):
    pass


class NonLatticeDual(ValidationError):
    pass


class WrongDimension(ValidationError):
    pass


class Decomposable(ValidationError):
    pass


class AmpleConditionViolated(ValidationError):
    pass


class NotPolynomial(ConsistencyError):
    pass


class MalformedE(ConsistencyError):
    pass


class RelationViolated(ConsistencyError):
    def __init__(self, message, face=None):
        self.face = face
        super().__init__(message)
