"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI reports in
its JSON error object.
"""

from __future__ import annotations


class FpBraceError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "DomainError"


class EvenCharacteristic(FpBraceError, ValueError):
    code = "EvenCharacteristic"


class NotPrime(FpBraceError, ValueError):
    code = "NotPrime"


class ReducibleModulus(FpBraceError, ValueError):
    code = "ReducibleModulus"


class SpecMismatch(FpBraceError, ValueError):
    """Operands live in different fields."""

    code = "SpecMismatch"


class DivisionByZero(FpBraceError, ZeroDivisionError):
    code = "DivisionByZero"


class ZeroInput(FpBraceError, ValueError):
    code = "ZeroInput"


class NotASquare(FpBraceError, ValueError):
    code = "NotASquare"


class DimensionMismatch(FpBraceError, ValueError):
    code = "DimensionMismatch"


class SingularMatrix(FpBraceError, ValueError):
    code = "SingularMatrix"


class NotSymmetric(FpBraceError, ValueError):
    code = "NotSymmetric"


class DegenerateForm(FpBraceError, ValueError):
    code = "DegenerateForm"


class InvalidDefiningMatrix(FpBraceError, ValueError):
    code = "InvalidDefiningMatrix"


class ProductNotOneDimensional(FpBraceError, ValueError):
    code = "ProductNotOneDimensional"


class UnsupportedD(FpBraceError, ValueError):
    code = "UnsupportedD"


class TooLargeForExhaustive(FpBraceError, ValueError):
    code = "TooLargeForExhaustive"


class TooLarge(FpBraceError, ValueError):
    code = "TooLarge"


class SearchSpaceTooLarge(FpBraceError, ValueError):
    code = "SearchSpaceTooLarge"


class IdentityMismatch(FpBraceError, AssertionError):
    """A group identity that must hold by construction did not."""

    code = "IdentityMismatch"


class NotIsomorphic(FpBraceError, ValueError):
    code = "NotIsomorphic"


class VerificationFailed(FpBraceError, AssertionError):
    code = "VerificationFailed"


class FormatError(FpBraceError, ValueError):
    """Malformed JSON input."""

    code = "FormatError"
