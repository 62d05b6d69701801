"""Exception hierarchy.

Everything raised on bad mathematical input derives from :class:`DomainError`;
the CLI maps those to exit status 1.
"""


class DomainError(ValueError):
    """Base class for all domain errors."""


class NotPrime(DomainError):
    pass


class ZeroInverse(DomainError, ZeroDivisionError):
    pass


class DimensionMismatch(DomainError):
    pass


class ZeroPolynomial(DomainError):
    pass


class BoundTooLarge(DomainError):
    pass


class ArityError(DomainError):
    pass


class NonHomogeneousSystem(DomainError):
    pass


class MixedDegrees(DomainError):
    pass


class EvenCharacteristic(DomainError):
    pass


class SingularSample(DomainError):
    pass


class SigningFailure(DomainError):
    pass


class ShapeMismatch(DomainError):
    pass


class OmegaOutOfRange(DomainError):
    pass


class FormatError(DomainError):
    """Malformed system or report file."""
