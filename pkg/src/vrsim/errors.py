"""Exception types raised by the simulator."""


class VrsimError(Exception):
    """Base class for all simulator errors."""


class DimensionError(VrsimError, ValueError):
    """Operator or space dimension is invalid or mismatched."""


class LabelError(VrsimError, ValueError):
    """Bare-state label outside the truncated space."""


class HermiticityError(VrsimError, ValueError):
    """An operator required to be Hermitian is not."""


class BracketError(VrsimError, RuntimeError):
    """Minimization bracket does not contain an interior minimum."""


class DegeneracyError(VrsimError, RuntimeError):
    """Accidental degeneracy makes a perturbative denominator vanish."""


class StiffnessError(VrsimError, RuntimeError):
    """Adaptive integrator step size underflowed."""


class NumericalHealthError(VrsimError, RuntimeError):
    """A quantity that must be numerically real or bounded is not."""
