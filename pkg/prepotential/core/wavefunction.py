"""
Bound-state wavefunctions built from the prepotential.

    phi_N(x) = exp(-W_0(x)) * prod_k (z(x) - z_k)
    W_0(x)   = -(A'+N) ln s(x) + B' x / (A'+N)

with s(x) = x, sinh x, cosh x or sin x, so that W_0' = -(A'+N) z + B'/(A'+N).
The exponential factor is evaluated in log space; the product carries the
sign.
"""

import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.integrate import simpson

try:
    from pydantic.v1 import BaseModel
except ImportError:
    from pydantic import BaseModel

from ..config.solver_config import DEFAULT_WAVEFUNCTION, Stencil, WavefunctionConfig
from .bae import solve_model
from .exceptions import BoundaryLeakError, PoleError
from .grid import Grid
from .models import (
    ArrayLike,
    ModelKind,
    ModelParams,
    RootSet,
    SpectralLevel,
    check_domain,
    coordinate,
    eigenvalue,
    potential,
    raw_couplings,
    spectral_level,
)
from .orthopoly import JacobiParams, LaguerreParams, jacobi_eval, laguerre_eval

Level = Union[int, SpectralLevel]

_LN2 = math.log(2.0)


class WaveSample(BaseModel):
    """phi_N sampled on a grid."""

    kind: ModelKind
    params: ModelParams
    grid: Grid
    values: np.ndarray
    norm_squared: float
    level: SpectralLevel
    roots: RootSet

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def N(self) -> int:
        return self.level.N


class ResidualReport(BaseModel):
    """Relative Schroedinger residual on a grid and on one with twice the spacing."""

    residual: float
    coarse_residual: float
    ratio: float
    stencil: int
    points: int


def _level_index(level: Level) -> int:
    return level.N if isinstance(level, SpectralLevel) else int(level)


def _log_scale(kind: ModelKind, x: np.ndarray) -> np.ndarray:
    """ln s(x), evaluated without overflow."""
    if kind is ModelKind.COULOMB:
        return np.log(x)
    if kind is ModelKind.ECKART:
        return x + np.log1p(-np.exp(-2.0 * x)) - _LN2
    if kind is ModelKind.ROSEN_MORSE_II:
        ax = np.abs(x)
        return ax + np.log1p(np.exp(-2.0 * ax)) - _LN2
    return np.log(np.sin(x))


def _w0(kind: ModelKind, params: ModelParams, N: int, x: np.ndarray) -> np.ndarray:
    a, b = raw_couplings(kind, params)
    return -(a + N) * _log_scale(kind, x) + b * x / (a + N)


def _resolve_roots(
    kind: ModelKind, params: ModelParams, N: int, roots: Optional[RootSet]
) -> np.ndarray:
    if roots is None:
        roots = solve_model(kind, params, N)
    values = roots.as_array()
    if values.size != N:
        raise ValueError(f"expected {N} roots, got {values.size}")
    return values


def _pole_distances(z: np.ndarray, roots: np.ndarray) -> np.ndarray:
    distance = z[:, None] - roots[None, :]
    floor = 1e-14 * (1.0 + np.abs(roots[None, :]))
    if roots.size and np.any(np.abs(distance) <= floor):
        raise PoleError("evaluation at the preimage of a root")
    return distance


def prepotential_w(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    roots: Optional[RootSet],
    x: ArrayLike,
) -> ArrayLike:
    """W_N(x) = W_0(x) - sum_k ln|z(x) - z_k|."""
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    z = np.asarray(coordinate(kind, xs))
    values = _resolve_roots(kind, params, N, roots)
    distance = _pole_distances(z, values)
    w = _w0(kind, params, N, xs) - np.sum(np.log(np.abs(distance)), axis=1)
    return float(w[0]) if scalar else w


def evaluate(
    kind: ModelKind,
    params: ModelParams,
    level: Level,
    roots: Optional[RootSet],
    x: ArrayLike,
) -> ArrayLike:
    """Un-normalized phi_N(x), finite everywhere in the open domain."""
    N = _level_index(level)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    z = np.asarray(coordinate(kind, xs))
    values = _resolve_roots(kind, params, N, roots)

    log_magnitude = -_w0(kind, params, N, xs)
    sign = np.ones_like(xs)
    if values.size:
        factors = z[:, None] - values[None, :]
        sign = np.prod(np.sign(factors), axis=1)
        with np.errstate(divide="ignore"):
            log_magnitude = log_magnitude + np.sum(np.log(np.abs(factors)), axis=1)
    phi = sign * np.exp(log_magnitude)
    return float(phi[0]) if scalar else phi


def evaluate_orthopoly_form(
    kind: ModelKind, params: ModelParams, N: int, x: ArrayLike
) -> ArrayLike:
    """phi_N in its Laguerre or Jacobi form, proportional to ``evaluate``.

    Complex-valued for Rosen-Morse I, where the Jacobi polynomial is taken
    at i z.
    """
    check_domain(kind, x)
    xs = np.asarray(x, dtype=float)
    a, b = raw_couplings(kind, params)
    c = b / (a + N)

    if kind is ModelKind.COULOMB:
        lp = LaguerreParams(n=N, a=2.0 * a - 1.0)
        return xs ** a * np.exp(-c * xs) * laguerre_eval(lp, 2.0 * c * xs)

    z = np.asarray(coordinate(kind, xs))
    if kind is ModelKind.ROSEN_MORSE_I:
        jp = JacobiParams(n=N, alpha=-a - N + 1j * c, beta=-a - N - 1j * c)
        # arccot(cot x) = x on (0, pi)
        envelope = (z * z + 1.0) ** (-(a + N) / 2.0) * np.exp(-c * xs)
        return envelope * np.asarray(jacobi_eval(jp, 1j * z))

    jp = JacobiParams(n=N, alpha=-a - N + c, beta=-a - N - c)
    alpha, beta = jp.alpha.real, jp.beta.real
    if kind is ModelKind.ECKART:
        envelope = (z - 1.0) ** (alpha / 2.0) * (z + 1.0) ** (beta / 2.0)
    else:
        envelope = (1.0 - z) ** (alpha / 2.0) * (1.0 + z) ** (beta / 2.0)
    return envelope * np.asarray(jacobi_eval(jp, z))


# ---------------------------------------------------------------------------
# Grids and samples
# ---------------------------------------------------------------------------

def _root_positions(kind: ModelKind, roots: np.ndarray) -> np.ndarray:
    """x_k with z(x_k) = z_k."""
    if kind is ModelKind.COULOMB:
        return 1.0 / roots
    if kind is ModelKind.ECKART:
        return np.arctanh(1.0 / roots)
    if kind is ModelKind.ROSEN_MORSE_II:
        return np.arctanh(roots)
    return np.pi / 2.0 - np.arctan(roots)


def _decay_rates(kind: ModelKind, params: ModelParams, N: int) -> Tuple[float, float]:
    """Exponential decay rates (left, right) at the infinite ends."""
    A, B = params.A, params.B
    if kind is ModelKind.COULOMB:
        return math.nan, B / (A + N)
    if kind is ModelKind.ECKART:
        return math.nan, B / (A + N) - (A + N)
    if kind is ModelKind.ROSEN_MORSE_II:
        shift = B / (A - N)
        return (A - N) - shift, (A - N) + shift
    return math.nan, math.nan


def _peak_position(kind: ModelKind, params: ModelParams, N: int) -> float:
    """Maximum of the envelope exp(-W_0)."""
    A, B = params.A, params.B
    if kind is ModelKind.COULOMB:
        return (A + N) ** 2 / B
    if kind is ModelKind.ECKART:
        return float(np.arctanh((A + N) ** 2 / B))
    if kind is ModelKind.ROSEN_MORSE_II:
        return float(-np.arctanh(B / (A - N) ** 2))
    return math.pi / 2.0


def default_grid(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    points: Optional[int] = None,
    roots: Optional[RootSet] = None,
    config: WavefunctionConfig = DEFAULT_WAVEFUNCTION,
) -> Grid:
    """A grid that holds every node and lets the tails decay below e^-45."""
    points = points or config.default_points
    nodes = _root_positions(kind, _resolve_roots(kind, params, N, roots))
    peak = _peak_position(kind, params, N)
    left_rate, right_rate = _decay_rates(kind, params, N)
    lo = min([peak, *nodes])
    hi = max([peak, *nodes])

    if kind is ModelKind.ROSEN_MORSE_I:
        edge = config.rmi_edge_offset
        if nodes.size:
            left, right = float(np.min(nodes)), math.pi - float(np.max(nodes))
            edge = min(edge, 0.5 * left, 0.5 * right)
        return Grid(xmin=edge, xmax=math.pi - edge, points=points)

    xmax = hi + config.decay_exponent / right_rate
    if kind is ModelKind.ROSEN_MORSE_II:
        xmin = lo - config.decay_exponent / left_rate
    else:
        xmin = config.singular_edge_fraction * peak
        if nodes.size:
            xmin = min(xmin, 0.5 * float(np.min(nodes)))
    return Grid(xmin=xmin, xmax=xmax, points=points)


def _apply_sign_convention(values: np.ndarray) -> np.ndarray:
    peak = float(np.max(np.abs(values)))
    significant = np.flatnonzero(np.abs(values) > 1e-12 * peak)
    if significant.size and values[significant[0]] < 0:
        return -values
    return values


def sample(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    grid: Optional[Grid] = None,
    roots: Optional[RootSet] = None,
    config: WavefunctionConfig = DEFAULT_WAVEFUNCTION,
) -> WaveSample:
    """Sample phi_N, positive next to the left edge; not yet normalized."""
    level = spectral_level(kind, params, N)
    if roots is None:
        roots = solve_model(kind, params, N)
    if grid is None:
        grid = default_grid(kind, params, N, roots=roots, config=config)
    x = grid.x
    check_domain(kind, x)

    values = _apply_sign_convention(np.asarray(evaluate(kind, params, level, roots, x)))
    if not np.all(np.isfinite(values)):
        raise BoundaryLeakError(f"non-finite wavefunction values on {grid}")
    norm_squared = float(simpson(values * values, x=x))
    return WaveSample(
        kind=kind,
        params=params,
        grid=grid,
        values=values,
        norm_squared=norm_squared,
        level=level,
        roots=roots,
    )


def truncated_ends(kind: ModelKind) -> Tuple[bool, bool]:
    """Which grid ends cut off an infinite domain."""
    if kind is ModelKind.ROSEN_MORSE_II:
        return True, True
    if kind is ModelKind.ROSEN_MORSE_I:
        return False, False
    return False, True


def _finite_end_offsets(
    kind: ModelKind, params: ModelParams, N: int, config: WavefunctionConfig
) -> Tuple[Optional[float], Optional[float]]:
    """Largest distance of each finite grid end from its domain edge.

    Ends within that distance are exempt from the leak test.
    """
    if kind is ModelKind.ROSEN_MORSE_II:
        return None, None
    if kind is ModelKind.ROSEN_MORSE_I:
        return config.rmi_edge_offset, config.rmi_edge_offset
    return config.singular_edge_fraction * _peak_position(kind, params, N), None


def check_boundary_leak(
    sample_: WaveSample, config: WavefunctionConfig = DEFAULT_WAVEFUNCTION
) -> None:
    """Raise when phi is not negligible at an end that cuts off part of the state.

    Infinite ends are always tested; a finite end is tested once it sits
    farther from its domain edge than the default grid would put it.
    """
    peak = float(np.max(np.abs(sample_.values)))
    grid = sample_.grid
    left, right = truncated_ends(sample_.kind)
    left_offset, right_offset = _finite_end_offsets(
        sample_.kind, sample_.params, sample_.N, config
    )
    if left_offset is not None:
        left = grid.xmin > left_offset * (1.0 + 1e-9)
    if right_offset is not None:
        right = math.pi - grid.xmax > right_offset * (1.0 + 1e-9)

    limit = config.leak_tolerance * peak
    for tested, value, where in (
        (left, sample_.values[0], grid.xmin),
        (right, sample_.values[-1], grid.xmax),
    ):
        if tested and abs(value) > limit:
            raise BoundaryLeakError(
                f"|phi({where:.6g})| = {abs(value):.3e} exceeds {limit:.3e}; "
                "widen the grid"
            )


def normalize(
    sample_: WaveSample, config: WavefunctionConfig = DEFAULT_WAVEFUNCTION
) -> WaveSample:
    """Scale so that the Simpson integral of phi^2 is one."""
    if not sample_.norm_squared > 0:
        raise BoundaryLeakError(f"non-positive norm {sample_.norm_squared}")
    check_boundary_leak(sample_, config)
    values = sample_.values / math.sqrt(sample_.norm_squared)
    norm_squared = float(simpson(values * values, x=sample_.x))
    return sample_.copy(update={"values": values, "norm_squared": norm_squared})


def node_count(sample_: WaveSample) -> int:
    """Strict sign changes of phi across the grid."""
    values = sample_.values[sample_.values != 0]
    return int(np.count_nonzero(np.signbit(values[1:]) != np.signbit(values[:-1])))


def overlap(first: WaveSample, second: WaveSample) -> float:
    """Simpson inner product of two samples on the same grid."""
    if first.grid != second.grid:
        raise ValueError("samples live on different grids")
    return float(simpson(first.values * second.values, x=first.x))


# ---------------------------------------------------------------------------
# Schroedinger residual
# ---------------------------------------------------------------------------

def second_derivative(
    values: np.ndarray, h: float, stencil: Stencil
) -> Tuple[np.ndarray, slice]:
    """Central second differences and the slice of grid points they refer to."""
    if stencil is Stencil.THREE_POINT:
        d2 = (values[:-2] - 2.0 * values[1:-1] + values[2:]) / (h * h)
        return d2, slice(1, -1)
    d2 = (
        -values[:-4]
        + 16.0 * values[1:-3]
        - 30.0 * values[2:-2]
        + 16.0 * values[3:-1]
        - values[4:]
    ) / (12.0 * h * h)
    return d2, slice(2, -2)


def _relative_residual(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    roots: RootSet,
    grid: Grid,
    energy: float,
    stencil: Stencil,
) -> float:
    x = grid.x
    phi = np.asarray(evaluate(kind, params, N, roots, x))
    d2, inner = second_derivative(phi, grid.spacing, stencil)
    v = np.asarray(potential(kind, params, x[inner]))
    res = -d2 + (v - energy) * phi[inner]
    return float(np.max(np.abs(res)) / np.max(np.abs(phi)))


def schrodinger_residual(
    kind: ModelKind,
    params: ModelParams,
    level: Level,
    roots: Optional[RootSet],
    grid: Grid,
    stencil: Stencil = Stencil.FIVE_POINT,
    energy: Optional[float] = None,
) -> ResidualReport:
    """max |-phi'' + (V - E_N) phi| / max |phi| and its change under grid doubling."""
    N = _level_index(level)
    check_domain(kind, grid.x)
    if roots is None:
        roots = solve_model(kind, params, N)
    if energy is None:
        energy = eigenvalue(kind, params, N)
    stencil = Stencil(stencil)

    fine = _relative_residual(kind, params, N, roots, grid, energy, stencil)
    coarse = _relative_residual(
        kind, params, N, roots, grid.coarsened(), energy, stencil
    )
    ratio = coarse / fine if fine > 0 else math.inf
    logger.debug(
        f"{kind.value} N={N}: residual {fine:.3e} "
        f"(coarse {coarse:.3e}, ratio {ratio:.2f})"
    )
    return ResidualReport(
        residual=fine,
        coarse_residual=coarse,
        ratio=ratio,
        stencil=int(stencil),
        points=grid.points,
    )


# ---------------------------------------------------------------------------
# Potential from the prepotential
# ---------------------------------------------------------------------------

def prepotential_terms(
    lam: float,
    a1: float,
    a0: float,
    roots: Sequence[float],
    z: ArrayLike,
    zp: Optional[ArrayLike] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """W_N' and W_N'' for W_N' = A_1 z + A_0 - sum_k z'/(z - z_k)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    zp = lam - z * z if zp is None else np.atleast_1d(np.asarray(zp, dtype=float))
    zpp = -2.0 * z * zp
    values = np.asarray(roots, dtype=float)
    inv = 1.0 / _pole_distances(z, values) if values.size else np.zeros((z.size, 0))
    s1 = np.sum(inv, axis=1)
    s2 = np.sum(inv * inv, axis=1)
    first = a1 * z + a0 - zp * s1
    second = a1 * zp - zpp * s1 + zp * zp * s2
    return first, second


def vn_general_qes(
    lam: float, a1: float, a0: float, roots: Sequence[float], z: ArrayLike
) -> ArrayLike:
    """W_N'^2 - W_N'' with N-independent A_1, A_0."""
    first, second = prepotential_terms(lam, a1, a0, roots, z)
    value = first * first - second
    return float(value[0]) if np.ndim(z) == 0 else value


def vn_from_prepotential(
    kind: ModelKind,
    params: ModelParams,
    N: int,
    roots: Optional[RootSet],
    x: ArrayLike,
) -> ArrayLike:
    """W_N'^2 - W_N''; equals V - E_N when the roots solve the BAE."""
    a, b = raw_couplings(kind, params)
    z = coordinate(kind, x)
    values = _resolve_roots(kind, params, N, roots)
    first, second = prepotential_terms(kind.lam, -(a + N), b / (a + N), values, z)
    value = first * first - second
    return float(value[0]) if np.ndim(x) == 0 else value


def vn_sinusoidal(
    A: float, B: float, N: int, roots: Sequence[float], x: ArrayLike
) -> ArrayLike:
    """W'^2 - W'' for W = b x - A ln x - sum_k ln|x - x_k|, b = B/(A+N).

    Equals A(A-1)/x^2 - 2B/x + b^2 when the x_k solve the sinusoidal BAE.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    values = np.asarray(roots, dtype=float)
    b = B / (A + N)
    inv = 1.0 / _pole_distances(xs, values) if values.size else np.zeros((xs.size, 0))
    first = b - A / xs - np.sum(inv, axis=1)
    second = A / xs ** 2 + np.sum(inv * inv, axis=1)
    value = first * first - second
    return float(value[0]) if np.ndim(x) == 0 else value
