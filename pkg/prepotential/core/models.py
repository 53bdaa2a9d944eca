"""
The four exactly solvable models on non-sinusoidal coordinates.

Every model uses a coordinate z(x) with z' = lambda - z^2 and a potential of
the form A'(A'-1) z^2 - 2 B' z. The couplings A', B' of that unified form are
called *raw* couplings here; the public ``ModelParams`` follow the usual
sign conventions (A -> -A, B -> -B for Rosen-Morse II, B -> -B for
Rosen-Morse I) so that the potentials read

    Coulomb         A(A-1)/x^2      - 2B/x
    Eckart          A(A-1)coth^2 x  - 2B coth x
    Rosen-Morse II  A(A+1)tanh^2 x  + 2B tanh x
    Rosen-Morse I   A(A-1)cot^2 x   + 2B cot x

The scale factor of x is fixed at one.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from .exceptions import DomainError, LevelNotFoundError, ParameterValidationError

ArrayLike = Union[float, np.ndarray]
Count = Union[int, float]


class ModelKind(str, Enum):
    """Supported potentials."""
    COULOMB = "coulomb"
    ECKART = "eckart"
    ROSEN_MORSE_II = "rm2"
    ROSEN_MORSE_I = "rm1"

    @property
    def lam(self) -> int:
        """The constant lambda in z' = lambda - z^2."""
        return _LAMBDA[self]

    @property
    def domain(self) -> Tuple[float, float]:
        """Open interval of x."""
        return _DOMAIN[self]

    @property
    def has_infinite_spectrum(self) -> bool:
        return self in (ModelKind.COULOMB, ModelKind.ROSEN_MORSE_I)


_LAMBDA = {
    ModelKind.COULOMB: 0,
    ModelKind.ECKART: 1,
    ModelKind.ROSEN_MORSE_II: 1,
    ModelKind.ROSEN_MORSE_I: -1,
}

_DOMAIN = {
    ModelKind.COULOMB: (0.0, math.inf),
    ModelKind.ECKART: (0.0, math.inf),
    ModelKind.ROSEN_MORSE_II: (-math.inf, math.inf),
    ModelKind.ROSEN_MORSE_I: (0.0, math.pi),
}


class ModelParams(BaseModel):
    """Dimensionless couplings A and B."""

    A: float
    B: float

    class Config:
        frozen = True


class ValidationResult(BaseModel):
    """Outcome of ``validate``; ``violations`` names each failed inequality."""

    ok: bool
    violations: List[str] = Field(default_factory=list)


class SpectralLevel(BaseModel):
    """A bound level with its closed-form energy and polynomial parameters."""

    N: int = Field(..., ge=0)
    energy: float
    jacobi_alpha: Optional[complex] = None
    jacobi_beta: Optional[complex] = None
    laguerre_gamma: Optional[float] = None

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class RootSet(BaseModel):
    """Roots z_k (or x_k for the sinusoidal Coulomb form), sorted ascending."""

    roots: List[float] = Field(default_factory=list)
    residual_norm: float = 0.0
    iterations: int = 0

    class Config:
        frozen = True

    @property
    def N(self) -> int:
        return len(self.roots)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=float)

    @classmethod
    def from_array(
        cls, values, residual_norm: float = 0.0, iterations: int = 0
    ) -> "RootSet":
        # adding 0.0 turns -0.0 into 0.0
        ordered = np.sort(np.asarray(values, dtype=float)) + 0.0
        return cls(
            roots=ordered.tolist(), residual_norm=residual_norm, iterations=iterations
        )


def roots_admissible(kind: ModelKind, roots: "RootSet") -> bool:
    """Coulomb z > 0, Eckart z > 1, RMII |z| < 1, RMI any real z."""
    z = roots.as_array()
    if not np.all(np.isfinite(z)):
        return False
    if kind is ModelKind.COULOMB:
        return bool(np.all(z > 0))
    if kind is ModelKind.ECKART:
        return bool(np.all(z > 1))
    if kind is ModelKind.ROSEN_MORSE_II:
        return bool(np.all(np.abs(z) < 1))
    return True


class HydrogenMapping(BaseModel):
    """The ordinary Coulomb problem: A = l + 1, B = e^2 / 2."""

    l: int = Field(..., ge=0)
    e_squared: float = Field(..., gt=0.0)

    class Config:
        frozen = True

    @property
    def gamma(self) -> float:
        return 2.0 * (self.l + 1)

    def to_params(self) -> ModelParams:
        return ModelParams(A=self.l + 1.0, B=self.e_squared / 2.0)

    def energy(self, N: int) -> float:
        """-e^4 / (4 (N + l + 1)^2)."""
        return -self.e_squared ** 2 / (4.0 * (N + self.l + 1) ** 2)

    def scaled_variable(self, x: ArrayLike, N: int) -> ArrayLike:
        """y = e^2 x / (N + l + 1), the argument of L_N^{2l+1}."""
        return self.e_squared * np.asarray(x, dtype=float) / (N + self.l + 1)


def _as_array(x: ArrayLike) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _restore(value: np.ndarray, scalar: bool) -> ArrayLike:
    return float(value) if scalar else value


def in_domain(kind: ModelKind, x: ArrayLike) -> np.ndarray:
    """Boolean mask of points inside the open domain."""
    arr = np.asarray(x, dtype=float)
    lo, hi = kind.domain
    return np.isfinite(arr) & (arr > lo) & (arr < hi)


def check_domain(kind: ModelKind, x: ArrayLike) -> None:
    mask = in_domain(kind, x)
    if not np.all(mask):
        bad = np.asarray(x, dtype=float)[~mask] if np.ndim(x) else x
        lo, hi = kind.domain
        raise DomainError(
            f"x outside the open domain ({lo}, {hi}) of {kind.value}: "
            f"{np.ravel(bad)[:3]}"
        )


def coordinate(kind: ModelKind, x: ArrayLike) -> ArrayLike:
    """z(x): 1/x, coth x, tanh x or cot x."""
    check_domain(kind, x)
    arr, scalar = _as_array(x)
    if kind is ModelKind.COULOMB:
        z = 1.0 / arr
    elif kind is ModelKind.ECKART:
        z = 1.0 / np.tanh(arr)
    elif kind is ModelKind.ROSEN_MORSE_II:
        z = np.tanh(arr)
    else:
        z = 1.0 / np.tan(arr)
    return _restore(z, scalar)


def coordinate_derivative(kind: ModelKind, z: ArrayLike) -> ArrayLike:
    """z' expressed through z: lambda - z^2."""
    arr, scalar = _as_array(z)
    return _restore(kind.lam - arr * arr, scalar)


def raw_couplings(kind: ModelKind, params: ModelParams) -> Tuple[float, float]:
    """Couplings (A', B') of the unified form A'(A'-1) z^2 - 2 B' z."""
    if kind is ModelKind.ROSEN_MORSE_II:
        return -params.A, -params.B
    if kind is ModelKind.ROSEN_MORSE_I:
        return params.A, -params.B
    return params.A, params.B


def potential(kind: ModelKind, params: ModelParams, x: ArrayLike) -> ArrayLike:
    """V(x) in the conventions listed in the module docstring."""
    z = np.asarray(coordinate(kind, x), dtype=float)
    a, b = raw_couplings(kind, params)
    value = a * (a - 1.0) * z * z - 2.0 * b * z
    return _restore(value, np.ndim(x) == 0)


def validate(kind: ModelKind, params: ModelParams) -> ValidationResult:
    """Check the admissibility inequalities of the model."""
    A, B = params.A, params.B
    violations: List[str] = []
    if not (math.isfinite(A) and math.isfinite(B)):
        violations.append("A, B finite")
        return ValidationResult(ok=False, violations=violations)

    if A <= 0:
        violations.append("A > 0")
    if kind is ModelKind.COULOMB and B <= 0:
        violations.append("B > 0")
    if kind is ModelKind.ROSEN_MORSE_II and abs(B) >= A * A:
        violations.append("|B| < A²")
    return ValidationResult(ok=not violations, violations=violations)


def require_valid(kind: ModelKind, params: ModelParams) -> None:
    result = validate(kind, params)
    if not result.ok:
        raise ParameterValidationError(
            f"invalid parameters for {kind.value} (A={params.A}, B={params.B}): "
            + ", ".join(f"violates {v}" for v in result.violations),
            violations=result.violations,
        )


def bound_state_count(kind: ModelKind, params: ModelParams) -> Count:
    """Number of normalizable levels; ``math.inf`` for Coulomb and RMI."""
    require_valid(kind, params)
    if kind.has_infinite_spectrum:
        return math.inf

    A, B = params.A, params.B
    count = 0
    if kind is ModelKind.ECKART:
        while B > (A + count) ** 2:
            count += 1
    else:
        while count < A and abs(B) < (A - count) ** 2:
            count += 1
    return count


def _require_level(kind: ModelKind, params: ModelParams, N: int) -> None:
    if N < 0 or int(N) != N:
        raise LevelNotFoundError(f"level index must be a non-negative integer, got {N}")
    count = bound_state_count(kind, params)
    if N >= count:
        raise LevelNotFoundError(
            f"level N={N} does not exist for {kind.value} "
            f"(A={params.A}, B={params.B}); bound-state count is {count}"
        )


def eigenvalue(kind: ModelKind, params: ModelParams, N: int) -> float:
    """Closed-form E_N."""
    _require_level(kind, params, N)
    A, B = params.A, params.B
    if kind is ModelKind.COULOMB:
        return -B * B / (A + N) ** 2
    if kind is ModelKind.ECKART:
        return -B * B / (A + N) ** 2 - A * (2 * N + 1) - N * N
    if kind is ModelKind.ROSEN_MORSE_II:
        return -B * B / (A - N) ** 2 + A * (2 * N + 1) - N * N
    return -B * B / (A + N) ** 2 + A * (2 * N + 1) + N * N


def susy_potential_shift(kind: ModelKind, params: ModelParams) -> float:
    """The zero-point shift E_0 of the supersymmetric convention."""
    return eigenvalue(kind, params, 0)


def susy_eigenvalue(kind: ModelKind, params: ModelParams, N: int) -> float:
    """E_N - E_0; zero for the ground state."""
    return eigenvalue(kind, params, N) - eigenvalue(kind, params, 0)


def susy_potential(kind: ModelKind, params: ModelParams, x: ArrayLike) -> ArrayLike:
    """V(x) - E_0."""
    shift = susy_potential_shift(kind, params)
    value = np.asarray(potential(kind, params, x)) - shift
    return _restore(value, np.ndim(x) == 0)


def superpotential(kind: ModelKind, params: ModelParams, x: ArrayLike) -> ArrayLike:
    """W_0'(N=0) = -A' z + B'/A'."""
    require_valid(kind, params)
    a, b = raw_couplings(kind, params)
    z = np.asarray(coordinate(kind, x), dtype=float)
    return _restore(-a * z + b / a, np.ndim(x) == 0)


def continuum_threshold(kind: ModelKind, params: ModelParams) -> float:
    """Limit of V at the infinite end(s) of the domain."""
    A, B = params.A, params.B
    if kind is ModelKind.COULOMB:
        return 0.0
    if kind is ModelKind.ECKART:
        return A * (A - 1.0) - 2.0 * B
    if kind is ModelKind.ROSEN_MORSE_II:
        return A * (A + 1.0) - 2.0 * abs(B)
    return math.inf


def jacobi_parameters(
    kind: ModelKind, params: ModelParams, N: int
) -> Optional[Tuple[complex, complex]]:
    """(alpha, beta) of the Jacobi polynomial whose roots are the BAE roots.

    Real for Eckart and Rosen-Morse II; a conjugate pair for Rosen-Morse I,
    where the polynomial is taken at the imaginary argument i z. ``None``
    for Coulomb.
    """
    if kind is ModelKind.COULOMB:
        return None
    a, b = raw_couplings(kind, params)
    shift = b / (a + N)
    if kind is ModelKind.ROSEN_MORSE_I:
        shift = 1j * shift
    return complex(-a - N + shift), complex(-a - N - shift)


def spectral_level(kind: ModelKind, params: ModelParams, N: int) -> SpectralLevel:
    energy = eigenvalue(kind, params, N)
    pair = jacobi_parameters(kind, params, N)
    return SpectralLevel(
        N=N,
        energy=energy,
        jacobi_alpha=pair[0] if pair else None,
        jacobi_beta=pair[1] if pair else None,
        laguerre_gamma=2.0 * params.A if kind is ModelKind.COULOMB else None,
    )


def qes_potential(lam: float, a1: float, a0: float, N: int, z: ArrayLike) -> ArrayLike:
    """V_N for N-independent prepotential coefficients A_1, A_0.

    The z^2 coefficient depends on N, so only the level N is solvable.
    """
    arr, scalar = _as_array(z)
    value = (
        (a1 + N) * (a1 + N + 1) * arr * arr
        + 2.0 * a1 * a0 * arr
        + a0 * a0
        - lam * ((2 * N + 1) * a1 + N * (N + 1))
    )
    return _restore(value, scalar)
