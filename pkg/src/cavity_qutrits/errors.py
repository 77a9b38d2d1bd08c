"""Exception types raised across the package."""


class CavityQutritError(Exception):
    """Base class for all package errors."""


class NonHermitianInput(CavityQutritError, ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class DimensionMismatch(CavityQutritError, ValueError):
    """Operand shapes are incompatible."""


class PhotonOutOfRange(CavityQutritError, ValueError):
    """Requested photon number exceeds the Fock truncation."""


class ConvergenceFailure(CavityQutritError, RuntimeError):
    """Step doubling failed to reach the requested tolerance."""


class InvalidStage(CavityQutritError, ValueError):
    """Unknown protocol stage number."""


class InvalidConfig(CavityQutritError, ValueError):
    """Protocol or run configuration is malformed."""


class DegenerateInput(CavityQutritError, ValueError):
    """Input carries no weight on the components an operation needs."""
