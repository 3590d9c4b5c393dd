"""Exception hierarchy shared by the whole package."""


class NQRError(Exception):
    """Base class for every error raised by nqr_entanglement."""


class NotHermitian(NQRError, ValueError):
    pass


class BadDimension(NQRError, ValueError):
    pass


class EtaOutOfRange(NQRError, ValueError):
    pass


class OrientationOutOfRange(NQRError, ValueError):
    pass


class ExponentOverflow(NQRError, OverflowError):
    """The Gibbs exponent is too large to evaluate in double precision."""


class NonpositiveTemperature(NQRError, ValueError):
    pass


class PresetNotFound(NQRError, KeyError):
    pass


class InvalidDensityMatrix(NQRError, ValueError):
    pass


class NonphysicalSpectrum(NQRError, ValueError):
    """The spin-flip product has eigenvalues that roundoff cannot explain."""


class OutOfRange(NQRError, ValueError):
    pass


class NoTransition(NQRError, RuntimeError):
    """Concurrence never crosses the threshold inside the search bracket."""


class InvalidSweep(NQRError, ValueError):
    pass


class SweepPointError(NQRError, RuntimeError):
    """A single grid point failed; carries its coordinates."""

    def __init__(self, coords, cause):
        self.coords = dict(coords)
        self.cause = cause
        where = ", ".join(f"{k}={v!r}" for k, v in self.coords.items())
        super().__init__(f"evaluation failed at ({where}): {cause}")

    def __reduce__(self):
        return (SweepPointError, (self.coords, self.cause))


class OutputError(NQRError, OSError):
    """Writing a result to its sink failed."""
