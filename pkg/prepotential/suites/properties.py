"""
Property suites: every check the verify command runs.
"""

import math
from typing import Dict, List, Tuple

import numpy as np
from loguru import logger

from ..config.solver_config import SeedStrategy, Stencil
from ..core.bae import (
    BaeProblem,
    residual_exact,
    residual_general,
    residual_scale,
    solve,
    solve_model,
    sum_rule_residual,
)
from ..core.grid import Grid
from ..core.models import (
    ModelKind,
    ModelParams,
    RootSet,
    bound_state_count,
    coordinate,
    eigenvalue,
    potential,
    raw_couplings,
    susy_eigenvalue,
)
from ..core.oracle import compare, convergence_ratios, truncation_sensitivity
from ..core.orthopoly import bae_roots_via_polynomials
from ..core.wavefunction import (
    default_grid,
    node_count,
    normalize,
    sample,
    schrodinger_residual,
    vn_from_prepotential,
)
from .base import SuiteContext, SuiteRecorder, SuiteResult, VerificationSuite

# Sampling windows for the pole-cancellation check
POLE_WINDOWS: Dict[ModelKind, Tuple[float, float]] = {
    ModelKind.COULOMB: (0.2, 20.0),
    ModelKind.ECKART: (0.25, 5.0),
    ModelKind.ROSEN_MORSE_II: (-5.0, 5.0),
    ModelKind.ROSEN_MORSE_I: (0.25, math.pi - 0.25),
}


def _label(kind: ModelKind, params: ModelParams, N: int) -> str:
    return f"{kind.value}(A={params.A:.6g}, B={params.B:.6g}) N={N}"


def draw_params(kind: ModelKind, rng: np.random.Generator, top: int) -> ModelParams:
    """Random admissible couplings with at least top+1 bound levels."""
    if kind is ModelKind.COULOMB:
        return ModelParams(A=rng.uniform(0.5, 3.0), B=rng.uniform(0.5, 3.0))
    if kind is ModelKind.ECKART:
        A = rng.uniform(0.5, 2.5)
        return ModelParams(A=A, B=(A + top + 1.0) ** 2 * rng.uniform(1.05, 1.5))
    if kind is ModelKind.ROSEN_MORSE_II:
        A = top + rng.uniform(1.5, 4.0)
        return ModelParams(A=A, B=rng.uniform(-0.8, 0.8) * (A - top) ** 2)
    return ModelParams(A=rng.uniform(0.5, 3.0), B=rng.uniform(-3.0, 3.0))


def _max_diff(first: np.ndarray, second: np.ndarray) -> float:
    if not first.size:
        return 0.0
    return float(np.max(np.abs(np.sort(first) - np.sort(second))))


class BaeEquivalenceSuite(VerificationSuite):
    """Newton-solved roots against companion-matrix polynomial roots."""

    name: str = "bae_equivalence"
    description: str = (
        "BAE roots agree with Laguerre/Jacobi polynomial roots on random draws"
    )
    tolerance: float = 1e-9
    seed_perturbation: float = 1e-4

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        worst = 0.0
        for index, kind in enumerate(context.selected_kinds()):
            rng = np.random.default_rng([context.seed, index])
            for _ in range(context.draws):
                params = draw_params(kind, rng, context.max_level)
                count = bound_state_count(kind, params)
                top = context.max_level
                if not math.isinf(count):
                    top = min(top, int(count) - 1)
                for N in range(1, top + 1):
                    diff = self._check_level(recorder, kind, params, N, rng)
                    worst = max(worst, diff)
        recorder.details["max_root_difference"] = worst
        return recorder.result()

    def _check_level(
        self,
        recorder: SuiteRecorder,
        kind: ModelKind,
        params: ModelParams,
        N: int,
        rng: np.random.Generator,
    ) -> float:
        label = _label(kind, params, N)
        reference = bae_roots_via_polynomials(kind, params, N).as_array()
        problem = BaeProblem.exact(kind, params, N)
        if kind is ModelKind.ROSEN_MORSE_I:
            seed = SeedStrategy.AUTO
        else:
            jitter = 1.0 + self.seed_perturbation * rng.standard_normal(N)
            seed = RootSet.from_array(reference * jitter)
        roots = solve(problem, seed=seed).as_array()

        scale = max(1.0, float(np.max(np.abs(reference))))
        diff = _max_diff(roots, reference)
        recorder.check(
            diff <= self.tolerance * scale, f"{label}: roots differ by {diff:.3e}"
        )

        # The general form with A_1 = -(A'+N), A_0 = B'/(A'+N) is the same system.
        a, b = raw_couplings(kind, params)
        general = BaeProblem.general_qes(kind.lam, -(a + N), b / (a + N), N)
        exact_residual = np.asarray(residual_exact(problem, roots))
        gap = np.max(np.abs(exact_residual - residual_general(general, roots)))
        recorder.check(
            gap <= 1e-13 * residual_scale(problem, roots) * N,
            f"{label}: exact and general residuals differ by {gap:.3e}",
        )
        return diff / scale


class PoleCancellationSuite(VerificationSuite):
    """W_N'^2 - W_N'' reproduces V - E_N away from the root preimages."""

    name: str = "pole_cancellation"
    description: str = "the prepotential potential equals V - E_N at random points"
    points: int = 200
    tolerance: float = 1e-8
    min_distance: float = 1e-2

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        rng = np.random.default_rng(context.seed)
        worst = 0.0
        for case in context.selected_cases():
            for N in range(case.n_max + 1):
                deviation = self._check_level(
                    recorder, case.kind, case.params, N, context, rng
                )
                worst = max(worst, deviation)
        recorder.details["max_relative_deviation"] = worst
        recorder.details["perturb_roots"] = context.perturb_roots
        return recorder.result()

    def _check_level(self, recorder, kind, params, N, context, rng) -> float:
        label = _label(kind, params, N)
        roots = solve_model(kind, params, N).as_array()
        if context.perturb_roots > 0:
            roots = roots + context.perturb_roots * (1.0 + np.abs(roots))
            logger.info(f"{label}: roots perturbed by {context.perturb_roots:g}")

        lo, hi = POLE_WINDOWS[kind]
        x = rng.uniform(lo, hi, self.points)
        z = np.asarray(coordinate(kind, x))
        if roots.size:
            nearest = np.min(np.abs(z[:, None] - roots[None, :]), axis=1)
            x = x[nearest >= self.min_distance]

        target = np.asarray(potential(kind, params, x)) - eigenvalue(kind, params, N)
        root_set = RootSet.from_array(roots)
        value = np.asarray(vn_from_prepotential(kind, params, N, root_set, x))
        relative = np.abs(value - target) / np.maximum(1.0, np.abs(target))
        deviation = float(np.max(relative))
        recorder.check(
            deviation < self.tolerance,
            f"{label}: W'^2 - W'' misses V - E_N by {deviation:.3e} (relative)",
        )
        return deviation


class NodeCountSuite(VerificationSuite):
    """phi_N has exactly N interior zeros."""

    name: str = "node_count"
    description: str = "normalized wavefunctions have N nodes"

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        counts: Dict[str, List[int]] = {}
        for case in context.selected_cases():
            found = []
            for N in range(case.n_max + 1):
                wave = normalize(sample(case.kind, case.params, N))
                nodes = node_count(wave)
                found.append(nodes)
                label = _label(case.kind, case.params, N)
                recorder.check(nodes == N, f"{label}: {nodes} nodes")
            counts[case.name] = found
        recorder.details["node_counts"] = counts
        return recorder.result()


class SchrodingerResidualSuite(VerificationSuite):
    """Finite-difference residual of the eigenvalue equation."""

    name: str = "schrodinger_residual"
    description: str = "-phi'' + (V - E_N) phi vanishes to discretization error"
    tolerance: float = 1e-4
    ratio_points: int = 8001
    ratio_range: Tuple[float, float] = (3.5, 4.5)

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        residuals: Dict[str, List[float]] = {}
        for case in context.selected_cases():
            kind, params = case.kind, case.params
            values = []
            for N in range(case.n_max + 1):
                label = _label(kind, params, N)
                roots = solve_model(kind, params, N)
                grid = default_grid(kind, params, N, roots=roots)
                fine = schrodinger_residual(kind, params, N, roots, grid)
                values.append(fine.residual)
                recorder.check(
                    fine.residual < self.tolerance,
                    f"{label}: residual {fine.residual:.3e}",
                )

                coarse = grid.with_points(self.ratio_points)
                order = schrodinger_residual(
                    kind, params, N, roots, coarse, Stencil.THREE_POINT
                )
                lo, hi = self.ratio_range
                recorder.check(
                    lo <= order.ratio <= hi,
                    f"{label}: grid-doubling ratio {order.ratio:.3f}",
                )
            residuals[case.name] = values
        recorder.details["residuals"] = residuals
        return recorder.result()


class OracleSuite(VerificationSuite):
    """Closed-form spectra against the finite-difference eigensolver."""

    name: str = "oracle"
    description: str = "E_N agrees with a three-point finite-difference spectrum"
    tolerance: float = 1e-3
    ratio_range: Tuple[float, float] = (3.5, 4.5)

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        errors: Dict[str, float] = {}
        for case in context.selected_cases():
            kind, params, n_max = case.kind, case.params, case.n_max
            report = compare(kind, params, n_max)
            errors[case.name] = report.max_rel_err
            for level in report.levels:
                recorder.check(
                    level.rel_err < self.tolerance,
                    f"{_label(kind, params, level.N)}: "
                    f"relative error {level.rel_err:.3e}",
                )

            lo, hi = self.ratio_range
            for N, ratio in enumerate(convergence_ratios(kind, params, n_max)):
                recorder.check(
                    lo <= ratio <= hi,
                    f"{_label(kind, params, N)}: convergence ratio {ratio:.3f}",
                )

            shifts = truncation_sensitivity(kind, params, n_max, config=None)
            for N, shift in enumerate(shifts.shifts):
                limit = 0.5 * self.tolerance * abs(eigenvalue(kind, params, N))
                recorder.check(
                    shift < limit,
                    f"{_label(kind, params, N)}: truncation shift {shift:.3e}",
                )
        recorder.details["max_relative_error"] = errors
        return recorder.result()


class SumRuleSuite(VerificationSuite):
    """Sinusoidal Coulomb roots: sum rule and reciprocity with the exact roots."""

    name: str = "sum_rule"
    description: str = "A sum 1/x_k = b N and x_k = 1/z_k for Coulomb"
    tolerance: float = 1e-10
    max_level: int = 6

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        for case in context.selected_cases():
            if case.kind is not ModelKind.COULOMB:
                continue
            params = case.params
            for N in range(1, self.max_level + 1):
                label = _label(ModelKind.COULOMB, params, N)
                problem = BaeProblem.coulomb_sinusoidal(params.A, params.B, N)
                x = solve(problem).as_array()
                scale = max(1.0, problem.b * N)
                rule = sum_rule_residual(problem, x)
                recorder.check(
                    rule <= self.tolerance * scale,
                    f"{label}: sum rule off by {rule:.3e}",
                )

                z = solve_model(ModelKind.COULOMB, params, N).as_array()
                diff = _max_diff(x, 1.0 / z)
                recorder.check(
                    diff <= self.tolerance * max(1.0, float(np.max(x))),
                    f"{label}: x_k and 1/z_k differ by {diff:.3e}",
                )
        return recorder.result()


class SymmetrySuite(VerificationSuite):
    """Parity of Rosen-Morse II and the supersymmetric zero point."""

    name: str = "symmetry"
    description: str = "RMII is invariant under x -> -x, B -> -B; E^SUSY_0 = 0"
    tolerance: float = 1e-10

    def _run(self, context: SuiteContext) -> SuiteResult:
        recorder = SuiteRecorder(self.name)
        for case in context.selected_cases():
            zero = susy_eigenvalue(case.kind, case.params, 0)
            recorder.check(zero == 0.0, f"{case.name}: E^SUSY_0 = {zero!r}")
            if case.kind is ModelKind.ROSEN_MORSE_II:
                self._check_parity(recorder, case.params, case.n_max)
        return recorder.result()

    def _check_parity(
        self, recorder: SuiteRecorder, params: ModelParams, n_max: int
    ) -> None:
        kind = ModelKind.ROSEN_MORSE_II
        mirrored = ModelParams(A=params.A, B=-params.B)
        for N in range(n_max + 1):
            label = _label(kind, params, N)
            first, second = eigenvalue(kind, params, N), eigenvalue(kind, mirrored, N)
            recorder.check(
                first == second,
                f"{label}: E_N changes under B -> -B ({first!r} vs {second!r})",
            )

            span = default_grid(kind, params, N)
            half = max(abs(span.xmin), abs(span.xmax))
            grid = Grid(xmin=-half, xmax=half, points=span.points)
            phi = normalize(sample(kind, params, N, grid=grid)).values
            psi = normalize(sample(kind, mirrored, N, grid=grid)).values[::-1]
            gap = min(
                float(np.max(np.abs(phi - psi))), float(np.max(np.abs(phi + psi)))
            )
            recorder.check(
                gap <= self.tolerance, f"{label}: mirror image differs by {gap:.3e}"
            )


def default_suites() -> List[VerificationSuite]:
    """The suites of a full verification run, in execution order."""
    return [
        BaeEquivalenceSuite(),
        PoleCancellationSuite(),
        NodeCountSuite(),
        SchrodingerResidualSuite(),
        OracleSuite(),
        SumRuleSuite(),
        SymmetrySuite(),
    ]
