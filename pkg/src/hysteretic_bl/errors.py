"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the admissible range of a function."""


class ConvergenceError(RuntimeError):
    """An iterative root or bracket search did not converge."""


class NoSignChange(ConvergenceError):
    """No bracketing sign change was found for a residual."""


class NotAdmissible(ValueError):
    """A shock or profile violates its admissibility condition."""


class StiffError(RuntimeError):
    """Adaptive step size collapsed during ODE integration."""


class NonlinearSolveFailure(RuntimeError):
    """Implicit pressure solve failed; carries the residual trace."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class ConsistencyError(RuntimeError):
    """An assembled wave element failed its own admissibility check."""


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""
