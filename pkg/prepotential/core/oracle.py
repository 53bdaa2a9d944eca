"""
Finite-difference Schroedinger eigensolver.

-phi'' + V phi = E phi is discretized with the three-point Laplacian on a
uniform grid with Dirichlet conditions at the two grid ends, giving a
symmetric tridiagonal matrix over the interior points. Only
``models.potential`` enters the matrix; closed-form energies are used to
pick the truncation and to compare.
"""

import math
import time
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import eigvalsh_tridiagonal

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from ..config.solver_config import DEFAULT_ORACLE, OracleSolverConfig
from .exceptions import LevelNotFoundError, OracleMismatchError
from .grid import Grid
from .models import (
    ModelKind,
    ModelParams,
    bound_state_count,
    check_domain,
    continuum_threshold,
    eigenvalue,
    potential,
)


class OracleConfig(BaseModel):
    """Grid and number of levels for one eigensolve."""

    grid: Grid
    levels: int = Field(..., ge=0)
    boundary: str = "dirichlet"

    class Config:
        frozen = True


class TridiagonalOperator(BaseModel):
    """Symmetric tridiagonal matrix acting on the interior grid points."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def size(self) -> int:
        return int(self.diagonal.size)

    @classmethod
    def from_potential(
        cls, spacing: float, values: np.ndarray
    ) -> "TridiagonalOperator":
        """2/h^2 + V on the diagonal, -1/h^2 beside it."""
        values = np.asarray(values, dtype=float)
        inv_h2 = 1.0 / (spacing * spacing)
        return cls(
            diagonal=2.0 * inv_h2 + values,
            off_diagonal=np.full(max(values.size - 1, 0), -inv_h2),
        )


class LevelComparison(BaseModel):
    N: int
    closed_form: float
    numeric: float
    abs_err: float
    rel_err: float
    extrapolated: Optional[float] = None


class OracleReport(BaseModel):
    kind: ModelKind
    params: ModelParams
    grid: Grid
    threshold: float
    levels: List[LevelComparison]
    runtime: float

    @property
    def max_rel_err(self) -> float:
        return max((level.rel_err for level in self.levels), default=0.0)


class TruncationReport(BaseModel):
    """Largest eigenvalue shift per level when the cut ends move."""

    shifts: List[float]

    @property
    def max_shift(self) -> float:
        return max(self.shifts, default=0.0)


def discretize(
    kind: ModelKind, params: ModelParams, config: OracleConfig
) -> TridiagonalOperator:
    grid = config.grid
    interior = grid.x[1:-1]
    check_domain(kind, interior)
    values = np.asarray(potential(kind, params, interior))
    return TridiagonalOperator.from_potential(grid.spacing, values)


def lowest_eigenvalues(
    operator: TridiagonalOperator,
    k: int,
    max_levels: int = DEFAULT_ORACLE.max_levels,
) -> List[float]:
    """The k smallest eigenvalues, ascending (LAPACK bisection on Sturm counts)."""
    if k == 0:
        return []
    if k > max_levels:
        raise ValueError(f"asked for {k} eigenvalues, at most {max_levels} allowed")
    if k > operator.size:
        raise ValueError(
            f"asked for {k} eigenvalues of a {operator.size}x{operator.size} matrix"
        )
    values = eigvalsh_tridiagonal(
        operator.diagonal,
        operator.off_diagonal,
        select="i",
        select_range=(0, k - 1),
        lapack_driver="stebz",
    )
    return np.sort(values).tolist()


def sturm_count(operator: TridiagonalOperator, energy: float) -> int:
    """Number of eigenvalues below ``energy``."""
    d = operator.diagonal
    e2 = operator.off_diagonal ** 2
    tiny = np.finfo(float).tiny
    count = 0
    q = d[0] - energy
    for i in range(operator.size):
        if i > 0:
            q = d[i] - energy - e2[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Truncation
# ---------------------------------------------------------------------------

def _end_limits(
    kind: ModelKind, params: ModelParams
) -> Tuple[Optional[float], Optional[float]]:
    """lim V at the left and right ends; ``None`` for ends that are not infinite."""
    A, B = params.A, params.B
    if kind is ModelKind.ROSEN_MORSE_II:
        return A * (A + 1.0) - 2.0 * B, A * (A + 1.0) + 2.0 * B
    if kind is ModelKind.ROSEN_MORSE_I:
        return None, None
    return None, continuum_threshold(kind, params)


def _turning_point(
    kind: ModelKind, params: ModelParams, energy: float, direction: int
) -> float:
    """Outermost point, on the side ``direction``, where V is still below ``energy``."""
    if kind is ModelKind.ROSEN_MORSE_II:
        xs = direction * np.concatenate(([0.0], np.geomspace(1e-3, 1e3, 4000)))
    else:
        xs = np.geomspace(1e-4, 1e6, 4000)
    allowed = np.flatnonzero(np.asarray(potential(kind, params, xs)) < energy)
    if allowed.size == 0:
        raise OracleMismatchError(
            f"no classically allowed region for E={energy} in {kind.value}"
        )
    return float(xs[min(allowed[-1] + 1, xs.size - 1)])


def oracle_grid(
    kind: ModelKind,
    params: ModelParams,
    n_max: int,
    points: Optional[int] = None,
    config: OracleSolverConfig = DEFAULT_ORACLE,
) -> Grid:
    """Default truncation for levels up to ``n_max``.

    Infinite ends are cut ``tail_decay`` decay lengths past the outer turning
    point of the highest level; singular ends sit at ``singular_xmin``; the
    Rosen-Morse I walls are ``wall_offset_factor`` spacings inside (0, pi).
    """
    points = points or config.default_points
    if kind is ModelKind.ROSEN_MORSE_I:
        h = math.pi / (points - 1 + 2.0 * config.wall_offset_factor)
        offset = config.wall_offset_factor * h
        return Grid(xmin=offset, xmax=math.pi - offset, points=points)

    energy = eigenvalue(kind, params, n_max)
    left_limit, right_limit = _end_limits(kind, params)
    right_tail = config.tail_decay / math.sqrt(right_limit - energy)
    xmax = _turning_point(kind, params, energy, +1) + right_tail
    if left_limit is None:
        xmin = config.singular_xmin
    else:
        left_tail = config.tail_decay / math.sqrt(left_limit - energy)
        xmin = _turning_point(kind, params, energy, -1) - left_tail
    return Grid(xmin=xmin, xmax=xmax, points=points)


def _numeric_levels(
    kind: ModelKind,
    params: ModelParams,
    config: OracleConfig,
    solver: OracleSolverConfig,
) -> Tuple[List[float], float]:
    """Bound numeric eigenvalues (below the continuum margin) and the cutoff used."""
    operator = discretize(kind, params, config)
    margin = solver.continuum_margin_factor * config.grid.spacing ** 2
    cutoff = continuum_threshold(kind, params) - margin
    values = lowest_eigenvalues(operator, config.levels, solver.max_levels)
    bound = [v for v in values if v < cutoff]
    if len(bound) < config.levels:
        raise OracleMismatchError(
            f"{kind.value} (A={params.A}, B={params.B}): "
            f"found {len(bound)} bound numeric levels "
            f"below {cutoff:.6g}, expected {config.levels}; lowest eigenvalues {values}"
        )
    if bound:
        above = bound[-1] + abs(bound[-1]) * 1e-9 + 1e-12
        if sturm_count(operator, above) < config.levels:
            logger.warning("Sturm count disagrees with the computed eigenvalues")
    return bound, cutoff


def _check_request(
    kind: ModelKind,
    params: ModelParams,
    n_max: int,
    points: int,
    solver: OracleSolverConfig,
) -> None:
    count = bound_state_count(kind, params)
    if n_max >= count:
        raise LevelNotFoundError(
            f"N={n_max} exceeds the bound-state count {count} of {kind.value}"
        )
    if n_max + 1 > solver.max_levels or (n_max + 1) * 10 >= points:
        raise ValueError(f"cannot resolve {n_max + 1} levels on {points} points")


def compare(
    kind: ModelKind,
    params: ModelParams,
    n_max: int,
    config: Optional[OracleConfig] = None,
    solver: OracleSolverConfig = DEFAULT_ORACLE,
    richardson: bool = False,
) -> OracleReport:
    """Pair the n_max+1 lowest bound numeric levels with E_N by rank."""
    started = time.perf_counter()
    if config is None:
        grid = oracle_grid(kind, params, n_max, config=solver)
        config = OracleConfig(grid=grid, levels=n_max + 1)
    elif config.levels != n_max + 1:
        config = config.copy(update={"levels": n_max + 1})
    _check_request(kind, params, n_max, config.grid.points, solver)

    numeric, cutoff = _numeric_levels(kind, params, config, solver)
    extrapolated: List[Optional[float]] = [None] * len(numeric)
    if richardson:
        fine_grid = config.grid.with_points(2 * (config.grid.points - 1) + 1)
        if kind is ModelKind.ROSEN_MORSE_I:
            fine_grid = oracle_grid(kind, params, n_max, fine_grid.points, solver)
        fine_config = config.copy(update={"grid": fine_grid})
        fine, _ = _numeric_levels(kind, params, fine_config, solver)
        extrapolated = [(4.0 * f - c) / 3.0 for f, c in zip(fine, numeric)]

    levels = []
    for N, (value, better) in enumerate(zip(numeric, extrapolated)):
        exact = eigenvalue(kind, params, N)
        best = value if better is None else better
        abs_err = abs(best - exact)
        levels.append(
            LevelComparison(
                N=N,
                closed_form=exact,
                numeric=value,
                abs_err=abs_err,
                rel_err=abs_err / max(abs(exact), 1e-300),
                extrapolated=better,
            )
        )

    report = OracleReport(
        kind=kind,
        params=params,
        grid=config.grid,
        threshold=cutoff,
        levels=levels,
        runtime=time.perf_counter() - started,
    )
    logger.info(
        f"oracle {kind.value} (A={params.A}, B={params.B}) N<={n_max}: "
        f"max rel err {report.max_rel_err:.2e} on {config.grid.points} points"
    )
    return report


def convergence_ratios(
    kind: ModelKind,
    params: ModelParams,
    n_max: int,
    solver: OracleSolverConfig = DEFAULT_ORACLE,
) -> List[float]:
    """|E(h) - E(h/2)| / |E(h/2) - E(h/4)| per level.

    About 4 for a second-order stencil.
    """
    coarse, middle, fine = solver.ratio_points
    reference = oracle_grid(kind, params, n_max, fine, solver)
    energies = []
    for points in (coarse, middle, fine):
        if kind is ModelKind.ROSEN_MORSE_I:
            grid = oracle_grid(kind, params, n_max, points, solver)
        else:
            grid = reference.with_points(points)
        level_config = OracleConfig(grid=grid, levels=n_max + 1)
        numeric, _ = _numeric_levels(kind, params, level_config, solver)
        energies.append(np.asarray(numeric))
    first = np.abs(energies[0] - energies[1])
    second = np.abs(energies[1] - energies[2])
    with np.errstate(divide="ignore", invalid="ignore"):
        return (first / second).tolist()


def _tail_variants(grid: Grid, tail: float, factor: float, right: bool) -> List[Grid]:
    """Grids whose cut end moves by +-factor*tail at fixed spacing.

    The other end stays put.
    """
    h = grid.spacing
    variants = []
    for sign in (-1.0, 1.0):
        points = int(round((grid.xmax - grid.xmin + sign * factor * tail) / h)) + 1
        if right:
            xmax = grid.xmin + (points - 1) * h
            variants.append(Grid(xmin=grid.xmin, xmax=xmax, points=points))
        else:
            xmin = grid.xmax - (points - 1) * h
            variants.append(Grid(xmin=xmin, xmax=grid.xmax, points=points))
    return variants


def truncation_sensitivity(
    kind: ModelKind,
    params: ModelParams,
    n_max: int,
    config: Optional[OracleConfig] = None,
    solver: OracleSolverConfig = DEFAULT_ORACLE,
) -> TruncationReport:
    """Move each cut end by the configured fraction of its tail at fixed spacing.

    The tail of an infinite end is its distance from the outer turning point
    of level ``n_max``; singular ends and the Rosen-Morse I walls scale their
    offset from the domain edge instead.
    """
    if config is None:
        grid = oracle_grid(kind, params, n_max, config=solver)
    else:
        grid = config.grid
    base_config = OracleConfig(grid=grid, levels=n_max + 1)
    base, _ = _numeric_levels(kind, params, base_config, solver)
    base = np.asarray(base)
    factor = solver.truncation_perturbation
    energy = eigenvalue(kind, params, n_max)

    variants: List[Grid] = []
    left_limit, right_limit = _end_limits(kind, params)
    if right_limit is not None:
        tail = grid.xmax - _turning_point(kind, params, energy, +1)
        variants.extend(_tail_variants(grid, tail, factor, right=True))
    if left_limit is not None:
        tail = _turning_point(kind, params, energy, -1) - grid.xmin
        variants.extend(_tail_variants(grid, tail, factor, right=False))
    elif kind is not ModelKind.ROSEN_MORSE_I:
        # singular left end
        for scale in (1.0 - factor, 1.0 + factor):
            xmin = grid.xmin * scale
            xmax = grid.xmax - grid.xmin + xmin
            variants.append(Grid(xmin=xmin, xmax=xmax, points=grid.points))
    else:
        for scale in (1.0 - factor, 1.0 + factor):
            offset = grid.xmin * scale
            variants.append(
                Grid(xmin=offset, xmax=math.pi - offset, points=grid.points)
            )

    shifts = np.zeros_like(base)
    for variant in variants:
        variant_config = OracleConfig(grid=variant, levels=n_max + 1)
        numeric, _ = _numeric_levels(kind, params, variant_config, solver)
        shifts = np.maximum(shifts, np.abs(np.asarray(numeric) - base))
    logger.debug(f"truncation shifts for {kind.value}: {shifts.tolist()}")
    return TruncationReport(shifts=shifts.tolist())
