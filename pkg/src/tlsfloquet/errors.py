"""Exception hierarchy shared by all modules."""


class TLSFloquetError(Exception):
    """Base class for every error raised by the package."""


class NumericalError(TLSFloquetError):
    """A numerical step failed or could not reach its accuracy target."""


class FrequencyMismatchError(TLSFloquetError, ValueError):
    """Two series live on different frequency lattices."""


class SecularTermError(NumericalError):
    """Integration of a series with nonzero mean was requested."""


class AccuracyError(NumericalError):
    """A quadrature or iteration did not converge."""


class ResonanceError(NumericalError):
    """A small denominator vanished (the secular frequency hit the lattice)."""


class InconsistentOmegaError(NumericalError):
    """The supplied secular frequency does not match the mean of f + g."""


class StiffnessError(NumericalError):
    """The adaptive integrator step size underflowed."""


class DegenerateDriveError(NumericalError):
    """The affine kappa solver met an equation it could not resolve."""


class UnsupportedError(TLSFloquetError):
    """The drive falls outside the treated cases."""


class UnsupportedSpectrumError(UnsupportedError):
    """The frequency content of q is not commensurate with the drive lattice."""


class WrongConditionError(UnsupportedError):
    """An expansion routine was called for a drive of another condition."""
