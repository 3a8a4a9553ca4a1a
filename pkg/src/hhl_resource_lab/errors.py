"""Exception types shared across the package."""


class HHLLabError(Exception):
    """Base class for all domain errors raised by this package."""


class HermiticityViolation(HHLLabError):
    """Matrix expected to be Hermitian is not (beyond tolerance)."""


class ShapeError(HHLLabError):
    """Array dimensions do not match the declared subsystem layout."""


class InvalidCut(HHLLabError):
    """Bipartition request is empty, full, or out of range."""


class SpectrumError(HHLLabError):
    """System matrix has a non-positive eigenvalue."""


class CircuitConstantError(HHLLabError):
    """Rotation constant outside (0, lambda_min]."""


class EigenvalueScalingError(HHLLabError):
    """Scaled eigenvalues are not integers; rescale the evolution time."""


class StageError(HHLLabError):
    """Unknown algorithm stage label."""


class RangeError(HHLLabError):
    """Scalar parameter outside its admissible range."""


class SizeError(HHLLabError):
    """Problem too large for an exponential-cost routine."""


class ZeroPostselection(HHLLabError):
    """Post-selected branch has zero probability."""


class DegenerateReference(HHLLabError):
    """Reference vector for a relative error is zero."""


class DegeneracyWarning(UserWarning):
    """Degenerate spectrum: closed-form expressions are withheld.

    Emitted via ``warnings.warn`` when eigenspaces are merged, and raised
    as an exception by closed forms that require distinct eigenvalues.
    """
