"""
Exception hierarchy for the prepotential package.

Input problems derive from ``ValueError``, numerical failures from
``RuntimeError``. Each class carries the CLI exit code it maps to.
"""

from typing import Any, List, Optional, Sequence


class PrepotentialError(Exception):
    """Base class for all errors raised by the package."""

    exit_code: int = 1


class DomainError(PrepotentialError, ValueError):
    """A coordinate lies outside the open domain of the model."""

    exit_code = 2


class ParameterValidationError(PrepotentialError, ValueError):
    """Model couplings violate the admissibility inequalities."""

    exit_code = 2

    def __init__(self, message: str, violations: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.violations: List[str] = list(violations or [])


class LevelNotFoundError(PrepotentialError, ValueError):
    """Requested level lies beyond the bound-state count."""

    exit_code = 2


class SingularConfigurationError(PrepotentialError, RuntimeError):
    """Two Bethe-ansatz roots coincide."""

    exit_code = 3


class PoleError(PrepotentialError, ValueError):
    """Prepotential evaluated at the preimage of a root."""

    exit_code = 2


class ConvergenceError(PrepotentialError, RuntimeError):
    """Newton iteration failed; carries the best iterate seen."""

    exit_code = 3

    def __init__(
        self,
        message: str,
        best_iterate: Optional[Any] = None,
        residual_norm: float = float("inf"),
        iterations: int = 0,
    ):
        super().__init__(message)
        self.best_iterate = best_iterate
        self.residual_norm = residual_norm
        self.iterations = iterations


class OrthopolyError(PrepotentialError, RuntimeError):
    """Polynomial root finder failed or produced inconsistent roots."""

    exit_code = 3


class BoundaryLeakError(PrepotentialError, RuntimeError):
    """Wavefunction tails are not negligible at a truncated end."""

    exit_code = 4


class OracleMismatchError(PrepotentialError, RuntimeError):
    """The finite-difference spectrum has fewer bound levels than requested."""

    exit_code = 1
