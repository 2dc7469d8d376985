"""Exception hierarchy.

Everything raised on bad mathematical input derives from HirzlocError so the
CLI can map domain failures to one exit code and keep genuine bugs separate.
"""


class HirzlocError(Exception):
    """Base class for all domain errors."""


class RankMismatchError(HirzlocError):
    """Operands live over tori of different rank."""


class ZeroWeightError(HirzlocError):
    """A nonzero character was required (denominator factor, tangent weight)."""


class CoefficientPoleError(HirzlocError):
    """A coefficient denominator vanishes at the requested substitution."""


class NotPolynomialError(HirzlocError):
    """A coefficient expected to clear to a polynomial in d did not."""


class DivisionNotExactError(HirzlocError):
    """An exact division that the theory guarantees failed on this input."""


class TruncationError(HirzlocError):
    """A series was not carried to sufficient order for the request."""


class ConeError(HirzlocError):
    """Invalid cone data (non-pointed, dependent rays, wrong side...)."""


class UnsupportedDimensionError(ConeError):
    """Cone dimension above the supported envelope."""


class LatticeError(HirzlocError):
    """A vector is not in the working lattice, or generators do not span."""


class RepresentationError(HirzlocError):
    """An exponent is not a nonnegative combination of the S-alphabet."""


class PoleError(HirzlocError):
    """A cohomological expansion has an uncancelled pole at t = 0."""


class JobError(HirzlocError):
    """Malformed job document (CLI input validation)."""
