"""
Laguerre and Jacobi polynomials and their roots.

Evaluation uses the standard three-term recurrences (the usual
normalization, L_n^a(0) = binom(n+a, n) and P_n^{(a,b)}(1) = binom(n+a, n)).
Jacobi parameters may be complex, which is how the Rosen-Morse I roots are
obtained: the polynomial is taken at y = i z with beta = conj(alpha).

Roots come from the eigenvalues of the companion matrix of the monic
polynomial and are then polished simultaneously with Newton-Maehly steps.
"""

from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

try:
    from pydantic.v1 import BaseModel, Field, validator
except ImportError:
    from pydantic import BaseModel, Field, validator

from ..config.solver_config import DEFAULT_ORTHOPOLY, OrthopolyConfig
from .exceptions import LevelNotFoundError, OrthopolyError
from .models import (
    ModelKind,
    ModelParams,
    RootSet,
    bound_state_count,
    jacobi_parameters,
    raw_couplings,
)

Number = Union[float, complex, np.ndarray]


class LaguerreParams(BaseModel):
    """Degree n and upper index a of L_n^a."""

    n: int = Field(..., ge=0)
    a: float

    class Config:
        frozen = True


class JacobiParams(BaseModel):
    """Degree n and (possibly complex) alpha, beta of P_n^{(alpha, beta)}."""

    n: int = Field(..., ge=0)
    alpha: complex
    beta: complex

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @validator("alpha", "beta", pre=True)
    def coerce_complex(cls, value):
        return complex(value)

    @property
    def is_real(self) -> bool:
        return self.alpha.imag == 0.0 and self.beta.imag == 0.0


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def laguerre_eval(p: LaguerreParams, y: Number) -> Number:
    """L_n^a(y) by the upward recurrence."""
    y = np.asarray(y)
    a = p.a
    prev = np.ones_like(y, dtype=float if not np.iscomplexobj(y) else complex)
    if p.n == 0:
        return prev if prev.ndim else prev.item()
    cur = 1.0 + a - y
    for k in range(1, p.n):
        prev, cur = cur, ((2 * k + 1 + a - y) * cur - (k + a) * prev) / (k + 1)
    return cur if np.ndim(cur) else cur.item()


def laguerre_derivative(p: LaguerreParams, y: Number) -> Number:
    """d/dy L_n^a(y) = -L_{n-1}^{a+1}(y)."""
    if p.n == 0:
        return np.zeros_like(np.asarray(y, dtype=float)) if np.ndim(y) else 0.0
    return -laguerre_eval(LaguerreParams(n=p.n - 1, a=p.a + 1.0), y)


def _jacobi_step(
    k: int, alpha: complex, beta: complex
) -> Tuple[complex, complex, complex]:
    """Coefficients (c1, c0, c2) with P_{k+1} = (c1 z + c0) P_k - c2 P_{k-1}."""
    s = 2 * k + alpha + beta
    denom = 2 * (k + 1) * (k + alpha + beta + 1) * s
    if abs(denom) < 1e-300:
        raise OrthopolyError(
            f"Jacobi recurrence degenerates at k={k} for alpha={alpha}, beta={beta}"
        )
    c1 = (s + 1) * (s + 2) * s / denom
    c0 = (s + 1) * (alpha * alpha - beta * beta) / denom
    c2 = 2 * (k + alpha) * (k + beta) * (s + 2) / denom
    return c1, c0, c2


def jacobi_eval(p: JacobiParams, z: Number) -> Number:
    """P_n^{(alpha, beta)}(z) in complex arithmetic.

    Returns real values when alpha, beta and z are real.
    """
    z_arr = np.asarray(z, dtype=complex)
    alpha, beta = p.alpha, p.beta
    prev = np.ones_like(z_arr)
    if p.n == 0:
        cur = prev
    else:
        cur = (alpha + 1) + (alpha + beta + 2) * (z_arr - 1) / 2
        for k in range(1, p.n):
            c1, c0, c2 = _jacobi_step(k, alpha, beta)
            prev, cur = cur, (c1 * z_arr + c0) * cur - c2 * prev

    if p.is_real and not np.iscomplexobj(z):
        cur = cur.real
    return cur if cur.ndim else cur.item()


def jacobi_derivative(p: JacobiParams, z: Number) -> Number:
    """d/dz P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}."""
    if p.n == 0:
        return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0.0
    shifted = JacobiParams(n=p.n - 1, alpha=p.alpha + 1, beta=p.beta + 1)
    value = (p.n + p.alpha + p.beta + 1) / 2 * np.asarray(jacobi_eval(shifted, z))
    if p.is_real and not np.iscomplexobj(z):
        value = value.real
    return value if value.ndim else value.item()


# ---------------------------------------------------------------------------
# Monic coefficients and companion roots
# ---------------------------------------------------------------------------

def _laguerre_polynomial(p: LaguerreParams) -> Polynomial:
    prev = Polynomial([1.0])
    if p.n == 0:
        return prev
    cur = Polynomial([1.0 + p.a, -1.0])
    for k in range(1, p.n):
        step = Polynomial([2 * k + 1 + p.a, -1.0])
        prev, cur = cur, (step * cur - (k + p.a) * prev) / (k + 1)
    return cur


def _jacobi_polynomial(p: JacobiParams) -> Polynomial:
    alpha, beta = p.alpha, p.beta
    prev = Polynomial(np.array([1.0], dtype=complex))
    if p.n == 0:
        return prev
    cur = Polynomial(
        np.array([(alpha - beta) / 2, (alpha + beta + 2) / 2], dtype=complex)
    )
    for k in range(1, p.n):
        c1, c0, c2 = _jacobi_step(k, alpha, beta)
        prev, cur = cur, Polynomial(np.array([c0, c1], dtype=complex)) * cur - c2 * prev
    return cur


def _companion_roots(poly: Polynomial, degree: int) -> np.ndarray:
    coef = np.asarray(poly.coef)
    if coef.size < degree + 1 or abs(coef[degree]) == 0.0:
        raise OrthopolyError(f"leading coefficient vanishes for degree {degree}")
    monic = coef[: degree + 1] / coef[degree]
    if degree == 1:
        return np.array([-monic[0]])
    return np.linalg.eigvals(P.polycompanion(monic))


def _polish(roots: np.ndarray, value_and_slope, iterations: int) -> np.ndarray:
    """Simultaneous Newton-Maehly refinement (deflating the other roots)."""
    z = roots.astype(complex)
    n = len(z)
    for _ in range(iterations):
        value, slope = value_and_slope(z)
        step = np.zeros_like(z)
        for k in range(n):
            if slope[k] == 0:
                continue
            w = value[k] / slope[k]
            others = np.delete(z, k)
            deflation = np.sum(1.0 / (z[k] - others)) if n > 1 else 0.0
            step[k] = w / (1.0 - w * deflation)
        z = z - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * (1.0 + np.abs(z))):
            break
    return z


def laguerre_roots(
    p: LaguerreParams, config: OrthopolyConfig = DEFAULT_ORTHOPOLY
) -> List[float]:
    """Ascending real roots of L_n^a, a > -1."""
    if p.n == 0:
        return []
    if p.a <= -1:
        raise OrthopolyError(
            f"Laguerre index a={p.a} must exceed -1 for real simple roots"
        )

    seed = _companion_roots(_laguerre_polynomial(p), p.n)

    def value_and_slope(y):
        return (
            np.asarray(laguerre_eval(p, y), dtype=complex),
            np.asarray(laguerre_derivative(p, y), dtype=complex),
        )

    roots = np.sort(_polish(seed, value_and_slope, config.polish_iterations).real)
    residual = stieltjes_residual_laguerre(p, roots)
    if residual > config.stieltjes_tolerance:
        logger.warning(
            f"Laguerre roots (n={p.n}, a={p.a}) "
            f"have root-equation residual {residual:.2e}"
        )
    return roots.tolist()


def jacobi_roots(
    p: JacobiParams, config: OrthopolyConfig = DEFAULT_ORTHOPOLY
) -> List[complex]:
    """Roots of P_n^{(alpha, beta)}, sorted by real then imaginary part."""
    if p.n == 0:
        return []

    seed = _companion_roots(_jacobi_polynomial(p), p.n)

    def value_and_slope(z):
        return (
            np.asarray(jacobi_eval(p, z), dtype=complex),
            np.asarray(jacobi_derivative(p, z), dtype=complex),
        )

    roots = _polish(seed, value_and_slope, config.polish_iterations)
    if not np.all(np.isfinite(roots)):
        raise OrthopolyError(f"non-finite Jacobi roots for {p}")
    roots = roots[np.lexsort((roots.imag, roots.real))]
    residual = stieltjes_residual_jacobi(p, roots)
    if residual > config.stieltjes_tolerance:
        logger.warning(
            f"Jacobi roots (n={p.n}, alpha={p.alpha}, beta={p.beta}) "
            f"have root-equation residual {residual:.2e}"
        )
    return [complex(r) for r in roots]


# ---------------------------------------------------------------------------
# Root characterisations
# ---------------------------------------------------------------------------

def _pair_sums(roots: np.ndarray) -> np.ndarray:
    diff = roots[:, None] - roots[None, :]
    np.fill_diagonal(diff, np.inf)
    return np.sum(1.0 / diff, axis=1)


def stieltjes_residual_laguerre(p: LaguerreParams, roots) -> float:
    """max_k |sum_{l!=k} 1/(y_k-y_l) + ((a+1)/2)/y_k - 1/2|."""
    y = np.asarray(roots, dtype=float)
    if y.size == 0:
        return 0.0
    gamma = p.a + 1.0
    return float(np.max(np.abs(_pair_sums(y) + 0.5 * gamma / y - 0.5)))


def stieltjes_residual_jacobi(p: JacobiParams, roots) -> float:
    """max_k |sum 1/(z_k-z_l) + ((alpha+1)/2)/(z_k-1) + ((beta+1)/2)/(z_k+1)|."""
    z = np.asarray(roots, dtype=complex)
    if z.size == 0:
        return 0.0
    terms = _pair_sums(z) + 0.5 * (p.alpha + 1) / (z - 1) + 0.5 * (p.beta + 1) / (z + 1)
    return float(np.max(np.abs(terms)))


# ---------------------------------------------------------------------------
# Model mapping
# ---------------------------------------------------------------------------

def laguerre_params_for(
    kind: ModelKind, params: ModelParams, N: int
) -> Optional[LaguerreParams]:
    """L_N^{2A-1} for Coulomb, ``None`` otherwise."""
    if kind is not ModelKind.COULOMB:
        return None
    a, _ = raw_couplings(kind, params)
    return LaguerreParams(n=N, a=2.0 * a - 1.0)


def jacobi_params_for(
    kind: ModelKind, params: ModelParams, N: int
) -> Optional[JacobiParams]:
    pair = jacobi_parameters(kind, params, N)
    if pair is None:
        return None
    return JacobiParams(n=N, alpha=pair[0], beta=pair[1])


def roots_for_couplings(
    lam: int,
    a: float,
    b: float,
    N: int,
    config: OrthopolyConfig = DEFAULT_ORTHOPOLY,
) -> np.ndarray:
    """Roots z_k of the exact BAE with raw couplings (A', B') = (a, b).

    lambda = 0 goes through L_N^{2a-1}(y) with z = 2b/((a+N) y); lambda = 1
    through P_N^{(alpha, beta)}(z); lambda = -1 through the complex-parameter
    Jacobi polynomial in y = i z.
    """
    if N == 0:
        return np.zeros(0)
    if a + N == 0:
        raise OrthopolyError(f"A'+N vanishes (A'={a}, N={N})")

    c = b / (a + N)
    if lam == 0:
        y = np.asarray(laguerre_roots(LaguerreParams(n=N, a=2.0 * a - 1.0), config))
        return np.sort(2.0 * c / y)

    shift = c if lam == 1 else 1j * c
    jp = JacobiParams(n=N, alpha=-a - N + shift, beta=-a - N - shift)
    roots = np.asarray(jacobi_roots(jp, config))
    if lam == -1:
        roots = -1j * roots

    tolerance = config.reality_tolerance * (1.0 + np.abs(roots))
    if np.any(np.abs(roots.imag) > tolerance):
        worst = float(np.max(np.abs(roots.imag)))
        raise OrthopolyError(
            f"polynomial roots are not real (max |Im z| = {worst:.3e}) "
            f"for lambda={lam}, A'={a}, B'={b}, N={N}"
        )
    return np.sort(roots.real)


def bae_roots_via_polynomials(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    config: OrthopolyConfig = DEFAULT_ORTHOPOLY,
) -> RootSet:
    """Bethe-ansatz roots z_k read off the Laguerre or Jacobi polynomial."""
    if N >= bound_state_count(kind, params):
        raise LevelNotFoundError(
            f"level N={N} is not bound for {kind.value} (A={params.A}, B={params.B})"
        )

    a, b = raw_couplings(kind, params)
    z = roots_for_couplings(kind.lam, a, b, N, config)
    logger.debug(f"{kind.value} N={N}: polynomial roots {z}")
    return RootSet.from_array(z)
