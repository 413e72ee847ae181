"""Exception hierarchy shared by all modules."""


class PowerDistError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(PowerDistError, ValueError):
    pass


class DimensionMismatch(PowerDistError, ValueError):
    pass


class SingularEvaluation(PowerDistError, ArithmeticError):
    """A negative exponent was evaluated at (or numerically on top of) a vertex."""


class OutOfRange(PowerDistError, ValueError):
    pass


class DegenerateSlice(PowerDistError, ValueError):
    """A slicing hyperplane misses the sphere or only touches it."""


class DegenerateSpectrum(PowerDistError, ValueError):
    """Two distance spectra cancel termwise, so no root bound can be drawn."""


class UnsupportedFamily(PowerDistError, ValueError):
    pass


class NotDualPair(PowerDistError, ValueError):
    pass


class NoConvergence(PowerDistError, RuntimeError):
    """A local search hit its iteration cap.

    The partially converged report is kept on ``self.report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
