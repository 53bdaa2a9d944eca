"""
Bethe ansatz equations for the roots of p_N(z).

Three forms are supported:

* ``EXACT``: sum_{l!=k} (z_k^2 - lam)/(z_k - z_l) - (A'+N-1) z_k + B'/(A'+N) = 0
* ``GENERAL_QES``: the same pair sum plus (A_1+1) z_k + A_0 with A_1, A_0 free
* ``COULOMB_SINUSOIDAL``: sum_{l!=k} 1/(x_k - x_l) + A/x_k - b = 0

Both z-forms share the shape  pair_sum + c1 z_k + c0, which is how the
residual and Jacobian are written below. The solver is a damped Newton
iteration with an analytic Jacobian.
"""

from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from ..config.solver_config import DEFAULT_BAE_SOLVER, BaeSolverConfig, SeedStrategy
from .exceptions import (
    ConvergenceError,
    DomainError,
    LevelNotFoundError,
    OrthopolyError,
    ParameterValidationError,
    SingularConfigurationError,
)
from .models import (
    ModelKind,
    ModelParams,
    RootSet,
    bound_state_count,
    raw_couplings,
    roots_admissible,
)
from .orthopoly import LaguerreParams, laguerre_roots, roots_for_couplings

# relative round-off floor of a single residual term
_ROUNDOFF = 100.0 * float(np.finfo(float).eps)


class BaeFlavor(str, Enum):
    """Form of the equations."""
    EXACT = "exact"
    GENERAL_QES = "general_qes"
    COULOMB_SINUSOIDAL = "coulomb_sinusoidal"


class BaeProblem(BaseModel):
    """One system of Bethe ansatz equations.

    ``A`` and ``B`` are raw couplings for the exact form (see
    ``models.raw_couplings``) and the public Coulomb couplings for the
    sinusoidal form. ``kind``/``params`` are set when the problem belongs to
    a model, which enables the admissibility check on the solution.
    """

    lam: int
    A: float = 0.0
    B: float = 0.0
    N: int = Field(..., ge=0)
    flavor: BaeFlavor = BaeFlavor.EXACT
    a1: Optional[float] = None
    a0: Optional[float] = None
    b: Optional[float] = None
    kind: Optional[ModelKind] = None
    params: Optional[ModelParams] = None

    class Config:
        frozen = True

    @classmethod
    def exact(cls, kind: ModelKind, params: ModelParams, N: int) -> "BaeProblem":
        count = bound_state_count(kind, params)
        if N >= count:
            raise LevelNotFoundError(
                f"level N={N} is not bound for {kind.value} "
                f"(A={params.A}, B={params.B}); count is {count}"
            )
        a, b = raw_couplings(kind, params)
        if a + N == 0:
            raise ParameterValidationError(
                f"A'+N vanishes for {kind.value}", ["A+N != 0"]
            )
        return cls(lam=kind.lam, A=a, B=b, N=N, kind=kind, params=params)

    @classmethod
    def general_qes(cls, lam: int, a1: float, a0: float, N: int) -> "BaeProblem":
        return cls(lam=lam, N=N, flavor=BaeFlavor.GENERAL_QES, a1=a1, a0=a0)

    @classmethod
    def coulomb_sinusoidal(cls, A: float, B: float, N: int) -> "BaeProblem":
        if A <= 0 or B <= 0:
            raise ParameterValidationError(
                f"sinusoidal Coulomb form needs A > 0 and B > 0 (A={A}, B={B})",
                [v for v, bad in (("A > 0", A <= 0), ("B > 0", B <= 0)) if bad],
            )
        return cls(
            lam=0, A=A, B=B, N=N,
            flavor=BaeFlavor.COULOMB_SINUSOIDAL,
            b=B / (A + N),
            kind=ModelKind.COULOMB,
            params=ModelParams(A=A, B=B),
        )

    def with_level(self, N: int) -> "BaeProblem":
        """The same family at another level; b of the sinusoidal form tracks N."""
        if self.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
            return self.copy(update={"N": N, "b": self.B / (self.A + N)})
        return self.copy(update={"N": N})

    @property
    def linear_coefficients(self) -> Tuple[float, float]:
        """(c1, c0) of the z-forms."""
        if self.flavor is BaeFlavor.GENERAL_QES:
            return self.a1 + 1.0, self.a0
        if self.flavor is BaeFlavor.EXACT:
            return -(self.A + self.N - 1.0), self.B / (self.A + self.N)
        raise ValueError("the sinusoidal form has no z-coefficients")

    def equivalent_raw_couplings(self) -> Tuple[float, float]:
        """(A', B') of the exact form with the same equations at this N."""
        if self.flavor is BaeFlavor.GENERAL_QES:
            return -self.a1 - self.N, -self.a1 * self.a0
        return self.A, self.B


# ---------------------------------------------------------------------------
# Residual and Jacobian
# ---------------------------------------------------------------------------

def _check_distinct(values: np.ndarray) -> np.ndarray:
    """Pairwise differences with an infinite diagonal."""
    diff = values[:, None] - values[None, :]
    np.fill_diagonal(diff, np.inf)
    if values.size > 1:
        gap = float(np.min(np.abs(diff)))
        if gap <= 1e-10 * (1.0 + float(np.max(np.abs(values)))):
            raise SingularConfigurationError(f"coincident roots (min gap {gap:.3e})")
    return diff


def _residual_z(lam: float, c1: float, c0: float, z: np.ndarray) -> np.ndarray:
    diff = _check_distinct(z)
    return np.sum((z[:, None] ** 2 - lam) / diff, axis=1) + c1 * z + c0


def _jacobian_z(lam: float, c1: float, z: np.ndarray) -> np.ndarray:
    diff = _check_distinct(z)
    inv = 1.0 / diff
    top = z[:, None] ** 2 - lam
    off = top * inv ** 2
    diag = np.sum(2.0 * z[:, None] * inv - off, axis=1) + c1
    jac = off.copy()
    np.fill_diagonal(jac, diag)
    return jac


def _check_positive(x: np.ndarray) -> None:
    if np.any(x <= 0):
        raise DomainError(f"sinusoidal Coulomb roots must be positive, got {x[x <= 0]}")


def _residual_sinusoidal(A: float, b: float, x: np.ndarray) -> np.ndarray:
    _check_positive(x)
    diff = _check_distinct(x)
    return np.sum(1.0 / diff, axis=1) + A / x - b


def _jacobian_sinusoidal(A: float, x: np.ndarray) -> np.ndarray:
    _check_positive(x)
    diff = _check_distinct(x)
    off = 1.0 / diff ** 2
    jac = off.copy()
    np.fill_diagonal(jac, -np.sum(off, axis=1) - A / x ** 2)
    return jac


def _as_values(roots: Union[RootSet, np.ndarray, List[float]]) -> np.ndarray:
    if isinstance(roots, RootSet):
        return roots.as_array()
    return np.asarray(roots, dtype=float)


def _require_flavor(problem: BaeProblem, flavor: BaeFlavor) -> None:
    if problem.flavor is not flavor:
        raise ValueError(
            f"expected a {flavor.value} problem, got {problem.flavor.value}"
        )


def residual_exact(problem: BaeProblem, roots) -> List[float]:
    _require_flavor(problem, BaeFlavor.EXACT)
    z = _as_values(roots)
    if z.size == 0:
        return []
    c1, c0 = problem.linear_coefficients
    return _residual_z(problem.lam, c1, c0, z).tolist()


def residual_general(problem: BaeProblem, roots) -> List[float]:
    _require_flavor(problem, BaeFlavor.GENERAL_QES)
    z = _as_values(roots)
    if z.size == 0:
        return []
    c1, c0 = problem.linear_coefficients
    return _residual_z(problem.lam, c1, c0, z).tolist()


def residual_coulomb_sinusoidal(problem: BaeProblem, roots) -> List[float]:
    _require_flavor(problem, BaeFlavor.COULOMB_SINUSOIDAL)
    x = _as_values(roots)
    if x.size == 0:
        return []
    return _residual_sinusoidal(problem.A, problem.b, x).tolist()


def _residual_array(problem: BaeProblem, values: np.ndarray) -> np.ndarray:
    if values.size == 0:
        return np.zeros(0)
    if problem.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        return _residual_sinusoidal(problem.A, problem.b, values)
    c1, c0 = problem.linear_coefficients
    return _residual_z(problem.lam, c1, c0, values)


def residual(problem: BaeProblem, roots) -> List[float]:
    """Residual of whichever form ``problem`` is."""
    return _residual_array(problem, _as_values(roots)).tolist()


def jacobian(problem: BaeProblem, roots) -> np.ndarray:
    """Analytic N x N Jacobian of ``residual``."""
    values = _as_values(roots)
    if values.size == 0:
        return np.zeros((0, 0))
    if problem.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        return _jacobian_sinusoidal(problem.A, values)
    c1, _ = problem.linear_coefficients
    return _jacobian_z(problem.lam, c1, values)


def residual_scale(problem: BaeProblem, roots) -> float:
    """Magnitude of the largest single term, for the convergence test."""
    values = _as_values(roots)
    if problem.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        return max(1.0, float(np.max(problem.A / values)), abs(problem.b))
    c1, c0 = problem.linear_coefficients
    diff = values[:, None] - values[None, :]
    np.fill_diagonal(diff, np.inf)
    pair = np.abs((values[:, None] ** 2 - problem.lam) / diff)
    return max(1.0, float(np.max(pair)), float(np.max(np.abs(c1 * values))), abs(c0))


# ---------------------------------------------------------------------------
# Seeds
# ---------------------------------------------------------------------------

def _single_root(problem: BaeProblem) -> float:
    """Closed-form root of the N = 1 system."""
    if problem.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        return problem.A / problem.b
    c1, c0 = problem.linear_coefficients
    if c1 == 0:
        raise SingularConfigurationError(
            "the one-root equation has a vanishing linear term"
        )
    return -c0 / c1 + 0.0


def _polynomial_seed(problem: BaeProblem) -> Optional[np.ndarray]:
    """Orthogonal-polynomial roots, or ``None`` when no mapping applies."""
    if problem.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        params = LaguerreParams(n=problem.N, a=2.0 * problem.A - 1.0)
        y = np.asarray(laguerre_roots(params))
        return y / (2.0 * problem.b)

    a, b = problem.equivalent_raw_couplings()
    if problem.lam == 0 and 2.0 * a - 1.0 <= -1.0:
        return None
    try:
        return roots_for_couplings(problem.lam, a, b, problem.N)
    except OrthopolyError as exc:
        logger.warning(
            f"no polynomial seed for {problem.flavor.value} N={problem.N}: {exc}"
        )
        return None


def _homotopy_seed(problem: BaeProblem, config: BaeSolverConfig) -> np.ndarray:
    """Solve levels 1..N-1 in turn, adding one root above the largest each time."""
    values = np.array([_single_root(problem.with_level(1))])
    for n in range(2, problem.N + 1):
        lower = _newton(problem.with_level(n - 1), values, config)
        lower_values = lower.as_array()
        values = np.append(lower_values, np.max(lower_values) + config.homotopy_offset)
    return values


def _default_strategy(problem: BaeProblem) -> SeedStrategy:
    if problem.lam == -1:
        return SeedStrategy.HOMOTOPY
    return SeedStrategy.POLYNOMIAL


def seed_strategy(
    problem: BaeProblem,
    strategy: SeedStrategy = SeedStrategy.AUTO,
    config: BaeSolverConfig = DEFAULT_BAE_SOLVER,
) -> RootSet:
    """Initial guess for ``solve``; deterministic."""
    if problem.N == 0:
        return RootSet()
    if problem.N == 1:
        return RootSet.from_array([_single_root(problem)])

    if strategy is SeedStrategy.AUTO:
        strategy = _default_strategy(problem)
    if strategy is SeedStrategy.POLYNOMIAL:
        values = _polynomial_seed(problem)
        if values is not None:
            return RootSet.from_array(values)
        logger.info("polynomial seed unavailable, falling back to homotopy")
    return RootSet.from_array(_homotopy_seed(problem, config))


# ---------------------------------------------------------------------------
# Newton iteration
# ---------------------------------------------------------------------------

def _separate(values: np.ndarray, config: BaeSolverConfig) -> Tuple[np.ndarray, bool]:
    """Push apart roots closer than the degenerate distance."""
    order = np.argsort(values)
    ordered = values[order]
    gaps = np.diff(ordered)
    scale = 1.0 + np.abs(ordered[1:])
    close = gaps <= config.degenerate_distance * scale
    if not np.any(close):
        return values, False
    for i in np.nonzero(close)[0]:
        ordered[i + 1] = ordered[i] + config.degenerate_perturbation * scale[i]
    separated = np.empty_like(values)
    separated[order] = ordered
    return separated, True


def _feasible(problem: BaeProblem, values: np.ndarray) -> bool:
    if not np.all(np.isfinite(values)):
        return False
    if problem.flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        return bool(np.all(values > 0))
    return True


def _converged(
    problem: BaeProblem, values: np.ndarray, norm: float, config: BaeSolverConfig
) -> bool:
    """Max-abs residual below the tolerance.

    When the largest term is so big that round-off alone exceeds the
    tolerance, the tolerance is taken relative to that term instead.
    """
    if norm <= config.tolerance:
        return True
    scale = residual_scale(problem, values)
    return config.tolerance < _ROUNDOFF * scale and norm <= config.tolerance * scale


def _record_separation(
    problem: BaeProblem, events: int, config: BaeSolverConfig
) -> int:
    events += 1
    logger.debug(f"degenerate roots separated (event {events})")
    if events >= config.max_degenerate_events:
        raise SingularConfigurationError(
            f"roots collapsed {events} times while solving N={problem.N}"
        )
    return events


def _newton(problem: BaeProblem, start: np.ndarray, config: BaeSolverConfig) -> RootSet:
    values = np.array(start, dtype=float)
    events = 0
    values, moved = _separate(values, config)
    if moved:
        events = _record_separation(problem, events, config)

    res = _residual_array(problem, values)
    norm = float(np.max(np.abs(res)))
    best_values, best_norm = values.copy(), norm

    for iteration in range(1, config.max_iterations + 1):
        if _converged(problem, values, norm, config):
            # one more full step to settle the last digits
            try:
                step = np.linalg.solve(jacobian(problem, values), -res)
                trial = values + step
                if _feasible(problem, trial):
                    trial_res = _residual_array(problem, trial)
                    if np.max(np.abs(trial_res)) <= norm:
                        values, res = trial, trial_res
                        norm = float(np.max(np.abs(res)))
            except (np.linalg.LinAlgError, SingularConfigurationError):
                pass
            return RootSet.from_array(
                values, residual_norm=norm, iterations=iteration - 1
            )

        try:
            step = np.linalg.solve(jacobian(problem, values), -res)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(
                f"singular Jacobian at iteration {iteration}",
                best_iterate=best_values.tolist(),
                residual_norm=best_norm,
                iterations=iteration,
            ) from exc

        t = 1.0
        accepted = None
        for _ in range(config.max_halvings + 1):
            trial = values + t * step
            if _feasible(problem, trial):
                trial, moved = _separate(trial, config)
                try:
                    trial_res = _residual_array(problem, trial)
                except SingularConfigurationError:
                    t *= 0.5
                    continue
                trial_norm = float(np.max(np.abs(trial_res)))
                if trial_norm < norm or accepted is None:
                    accepted = (trial, trial_res, trial_norm, moved)
                if trial_norm < norm:
                    break
            t *= 0.5

        if accepted is None:
            raise ConvergenceError(
                f"no feasible step at iteration {iteration}",
                best_iterate=best_values.tolist(),
                residual_norm=best_norm,
                iterations=iteration,
            )

        values, res, norm, moved = accepted
        if moved:
            events = _record_separation(problem, events, config)
        if norm < best_norm:
            best_values, best_norm = values.copy(), norm
        logger.debug(f"newton iteration {iteration}: residual {norm:.3e}, step {t:.3g}")

    raise ConvergenceError(
        f"no convergence after {config.max_iterations} iterations "
        f"(residual {best_norm:.3e})",
        best_iterate=best_values.tolist(),
        residual_norm=best_norm,
        iterations=config.max_iterations,
    )


def _check_admissible(problem: BaeProblem, result: RootSet) -> RootSet:
    if problem.kind is None or problem.flavor is not BaeFlavor.EXACT:
        return result
    if not roots_admissible(problem.kind, result):
        raise ConvergenceError(
            f"converged roots {result.roots} lie outside "
            f"the physical region of {problem.kind.value}",
            best_iterate=result.roots,
            residual_norm=result.residual_norm,
            iterations=result.iterations,
        )
    return result


def solve(
    problem: BaeProblem,
    seed: Union[RootSet, SeedStrategy] = SeedStrategy.AUTO,
    config: BaeSolverConfig = DEFAULT_BAE_SOLVER,
) -> RootSet:
    """Converged roots, sorted ascending.

    A homotopy seed that fails is retried once from the polynomial seed.
    """
    if problem.N == 0:
        return RootSet()

    if isinstance(seed, RootSet):
        if seed.N != problem.N:
            raise ValueError(f"seed has {seed.N} roots, problem needs {problem.N}")
        return _check_admissible(problem, _newton(problem, seed.as_array(), config))

    strategy = _default_strategy(problem) if seed is SeedStrategy.AUTO else seed
    try:
        start = seed_strategy(problem, strategy, config)
        return _check_admissible(problem, _newton(problem, start.as_array(), config))
    except (ConvergenceError, SingularConfigurationError) as exc:
        if strategy is not SeedStrategy.HOMOTOPY:
            logger.error(f"BAE solve failed for N={problem.N}: {exc}")
            raise
        fallback = _polynomial_seed(problem)
        if fallback is None:
            logger.error(
                f"BAE solve failed for N={problem.N} "
                f"and no polynomial seed exists: {exc}"
            )
            raise
        logger.warning(
            f"homotopy seed failed ({exc}); retrying from the polynomial seed"
        )
        return _check_admissible(problem, _newton(problem, fallback, config))


def solve_model(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    config: BaeSolverConfig = DEFAULT_BAE_SOLVER,
) -> RootSet:
    """Shorthand for ``solve(BaeProblem.exact(kind, params, N))``."""
    return solve(BaeProblem.exact(kind, params, N), config=config)


def sum_rule_residual(problem: BaeProblem, roots) -> float:
    """|A sum 1/x_k - b N| for the sinusoidal Coulomb form."""
    _require_flavor(problem, BaeFlavor.COULOMB_SINUSOIDAL)
    x = _as_values(roots)
    return abs(problem.A * float(np.sum(1.0 / x)) - problem.b * problem.N)
