"""Exception types shared across the package."""


class SymflowError(Exception):
    """Base class for all package errors."""


class DomainError(SymflowError, ValueError):
    """Evaluation outside the physical domain (h <= 0, non-finite input, ...)."""


class ParameterError(SymflowError, ValueError):
    """Invalid constructor parameters (degenerate coefficients, bad ranges)."""


class ConfigurationError(SymflowError, ValueError):
    """Invalid sampling box, config file, or campaign setup."""


class PreconditionError(SymflowError, ValueError):
    """A stated operation precondition was violated (e.g. off-manifold jet)."""


class EvaluationError(SymflowError, RuntimeError):
    """Coefficient or field evaluation produced a non-finite value."""


class CompatibilityError(SymflowError, ValueError):
    """f fails the second-order compatibility equation; carries the residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateMapError(SymflowError, ArithmeticError):
    """Hodograph Jacobian (numerically) singular near the requested point."""


class NewtonDivergenceError(SymflowError, RuntimeError):
    """Damped Newton ran out of iterations; carries the last iterate."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class ConstructionError(SymflowError, RuntimeError):
    """A sampled field could not be built (empty converged region)."""


class SonicPointError(SymflowError, ArithmeticError):
    """Characteristic degeneracy (u - p)^2 = g (h + H) hit during reduction."""


class PositivityError(SymflowError, RuntimeError):
    """Finite-volume update produced a non-positive height; carries the cell."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell
