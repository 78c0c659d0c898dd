"""Exception hierarchy for the adelic library.

Every domain failure raises a subclass of AdelicError so callers (and the
CLI) can distinguish domain errors from genuine bugs.
"""


class AdelicError(Exception):
    """Base class for all library-level errors."""


class NotPrimeError(AdelicError):
    """Raised when a composite or invalid number is used as a prime."""


class PrimeMismatchError(AdelicError):
    """Operands live over different primes."""


class PlaceMismatchError(AdelicError):
    """A value was supplied at the wrong place (real vs finite)."""


class PrecisionExhaustedError(AdelicError):
    """A digit-level decision could not be made within the precision window."""


class OutOfConvergenceDomainError(AdelicError):
    """Series argument outside its p-adic convergence domain."""


class OutOfConvergenceRegionError(AdelicError):
    """Complex parameters outside the absolute-convergence region."""


class RefinementTooCoarseError(AdelicError):
    """Integrand is not constant on the cosets of the requested refinement."""


class ZeroArgumentError(AdelicError):
    """Operation undefined at zero."""


class EvenPrimeError(AdelicError):
    """Operation requires an odd prime."""


class ZeroQuadraticCoefficientError(AdelicError):
    """Gauss integral needs a nonzero quadratic coefficient."""


class NotAnIdeleError(AdelicError):
    """Adele does not satisfy the unit-tail / nonzero-component contract."""


class UnsupportedRealFactorError(AdelicError):
    """Real Schwartz factor outside the closed Hermite-Gaussian catalog."""


class PoleArgumentError(AdelicError):
    """Argument sits on (or numerically too close to) a pole."""


class OutOfDomainError(AdelicError):
    """Model evaluated outside its declared time domain."""


class DegenerateTimeError(AdelicError):
    """The mixed action coefficient is undefined or zero at this time."""


class NotStabilizedError(AdelicError):
    """A regularized ball integral changed when the ball was enlarged."""


class NotProportionalError(AdelicError):
    """No single constant phase relates the two operator orderings."""


class ZeroFunctionError(AdelicError):
    """An eigenvalue-style check was invoked on the zero function."""


class UnknownModelError(AdelicError):
    """Unrecognised quadratic-model preset name."""


class DimensionTooSmallError(AdelicError):
    """Star product requires at least two coordinates."""


class HalfIntegerObstructionError(AdelicError):
    """At p = 2 the half-angle phase leaves the stored phase lattice."""


class WindowTooSmallError(AdelicError):
    """No coset where the windowed computation matches the uncut one."""
