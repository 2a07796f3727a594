"""Exception types shared across the package.

Every error raised by library code derives from AlgebraError, so callers
(and the CLI) can separate mathematical precondition failures from plain
bugs.
"""


class AlgebraError(Exception):
    pass


# -- fields ----------------------------------------------------------------

class FieldMismatch(AlgebraError):
    pass


class ZeroPolynomial(AlgebraError):
    pass


class CapacityExceeded(AlgebraError):
    """Integer data in a computation exceeded the configured bit bound."""


# -- linalg ----------------------------------------------------------------

class NotSquare(AlgebraError):
    pass


class SizeMismatch(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


# -- operators ---------------------------------------------------------------

class NegativeIndexLeak(AlgebraError):
    """An operator band would write to a negative row index."""


class WrongField(AlgebraError):
    pass


class NotEventuallyDiagonal(AlgebraError):
    pass


class DuplicateLambda(AlgebraError):
    pass


class FieldTooSmall(AlgebraError):
    pass


# -- idempotents -------------------------------------------------------------

class InvalidFamily(AlgebraError):
    pass


class NotSummable(AlgebraError):
    pass


class NotIdempotent(AlgebraError):
    pass


class NonCommuting(AlgebraError):
    pass


class UnrepresentableSum(AlgebraError):
    """A symbolic idempotent sum does not fit the banded operator class."""


# -- treegen -----------------------------------------------------------------

class TruncationTooSmall(AlgebraError):
    pass


class FiniteFieldUnsupported(AlgebraError):
    pass


class VerifyFailed(AlgebraError):
    pass


# -- funcalg -----------------------------------------------------------------

class NotSubalgebra(AlgebraError):
    pass


class NotAlgebraHom(AlgebraError):
    pass


class DoesNotSplitSimply(AlgebraError):
    pass


class UnsupportedCharCase(AlgebraError):
    """Radical over F_p is only implemented for commutative algebras."""


class NotAssociative(AlgebraError):
    pass


# -- text formats --------------------------------------------------------------

class ParseError(AlgebraError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
