"""Exception hierarchy shared by every module of the package."""


class BerndtForgeError(Exception):
    """Base class for all package errors."""


class DomainError(BerndtForgeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonPolynomialResult(BerndtForgeError):
    """A substitution that should produce a polynomial left a denominator in x."""


class DivisorNotUnit(BerndtForgeError, ZeroDivisionError):
    """Series division by a series whose constant term is not invertible."""


class IntegralityViolation(BerndtForgeError):
    """A coefficient table expected to lie in Z[x] has a non-integer entry."""


class CalibrationFailure(BerndtForgeError):
    """No candidate normalization reconciles a coefficient family with its identity."""


class PrecisionLoss(BerndtForgeError):
    """The requested evaluation point cannot be represented at working precision."""


class ImaginaryResidue(BerndtForgeError):
    """A quantity that must be real kept a non-negligible imaginary part."""


class NonConvergence(BerndtForgeError):
    """An iterative numerical scheme failed to reach its target accuracy."""


class SingularIntegrand(BerndtForgeError):
    """The integrand vanishes in its denominator on the integration path."""


class SlowConvergence(BerndtForgeError):
    """A lattice sum would need more terms than the configured budget."""
