"""Exception hierarchy.

Every numerical failure raised by the toolkit derives from ``NuSpectraError``;
the CLI prints the class name on stderr so failures are machine-parseable.
"""


class NuSpectraError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameters(NuSpectraError, ValueError):
    """A parameter set violates a type invariant (e.g. ``alpha == 0``)."""


class ConfigError(NuSpectraError, ValueError):
    """A run configuration could not be parsed or validated."""


class PoleError(NuSpectraError, ZeroDivisionError):
    """A potential or deformed function was evaluated at a pole."""


class DivisionByZero(NuSpectraError, ZeroDivisionError):
    """A closed-form energy formula hit its genuine pole (2n + 1 - eta*H = 0)."""


class CaseViolation(NuSpectraError, ValueError):
    """Special-case evaluator called with depths the case requires to be zero."""


class NoRealK(NuSpectraError):
    """The perfect-square condition on the NU radicand has no real solution."""


class NoAdmissibleBranch(NuSpectraError):
    """No NU branch satisfies tau' < 0."""


class UnsupportedSigma(NuSpectraError):
    """sigma(z) does not have the form c*z*(1 - q*z)."""


class NoSignChange(NuSpectraError):
    """Quantization residual does not change sign on the bracket."""


class NonRealDelta(NuSpectraError):
    """xi - beta4 < 0 somewhere in the bracket, so delta is not real."""


class DomainError(NuSpectraError, ValueError):
    """Argument outside the mathematical domain of a special function."""


class ConvergenceDomainError(DomainError):
    """Hypergeometric series requested outside its convergence disc."""


class NonDecaying(NuSpectraError):
    """Sampled wavefunction does not decay at the grid ends."""


class ZeroNorm(NuSpectraError):
    """Wavefunction has vanishing norm."""


class GridMismatch(NuSpectraError, ValueError):
    """Sampled functions live on different grids."""


class NonFiniteValue(NuSpectraError, ValueError):
    """Potential produced a non-finite value on the grid."""


class LevelNotFound(NuSpectraError):
    """Requested bound level does not exist below the window."""


class NoConvergence(NuSpectraError):
    """Iterative solver exhausted its iteration budget."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
