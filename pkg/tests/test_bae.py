"""
Tests for the Bethe ansatz solver.
"""

import math

import numpy as np
import pytest

from prepotential.config.solver_config import BaeSolverConfig, SeedStrategy
from prepotential.core.bae import (
    BaeFlavor,
    BaeProblem,
    jacobian,
    residual,
    residual_exact,
    residual_general,
    residual_scale,
    seed_strategy,
    solve,
    solve_model,
    sum_rule_residual,
)
from prepotential.core.exceptions import (
    ConvergenceError,
    LevelNotFoundError,
    ParameterValidationError,
    SingularConfigurationError,
)
from prepotential.core.models import (
    ModelKind,
    ModelParams,
    RootSet,
    raw_couplings,
    roots_admissible,
)
from prepotential.core.orthopoly import bae_roots_via_polynomials


def test_ground_state_has_no_roots(coulomb):
    result = solve_model(*coulomb, 0)
    assert result.roots == []
    assert result.N == 0


def test_single_root_closed_forms():
    eckart = solve_model(ModelKind.ECKART, ModelParams(A=2.0, B=16.0), 1)
    assert eckart.roots == pytest.approx([8.0 / 3.0], rel=1e-12)

    symmetric = solve_model(ModelKind.ROSEN_MORSE_I, ModelParams(A=1.0, B=0.0), 1)
    assert symmetric.roots == pytest.approx([0.0], abs=1e-14)


def test_solution_satisfies_the_equations(case):
    for N in range(1, case.n_max + 1):
        problem = BaeProblem.exact(case.kind, case.params, N)
        roots = solve(problem)
        assert roots.N == N
        assert roots_admissible(case.kind, roots)
        scale = residual_scale(problem, roots)
        assert max(abs(r) for r in residual(problem, roots)) < 1e-10 * scale


def test_matches_polynomial_roots(case):
    for N in range(1, case.n_max + 1):
        solved = solve_model(case.kind, case.params, N).as_array()
        reference = bae_roots_via_polynomials(case.kind, case.params, N).as_array()
        scale = max(1.0, float(np.max(np.abs(reference))))
        np.testing.assert_allclose(solved, reference, rtol=0, atol=1e-9 * scale)


def test_roots_are_sorted(rm2):
    roots = solve_model(*rm2, 3).roots
    assert roots == sorted(roots)


def test_homotopy_and_polynomial_seeds_agree(rm2):
    problem = BaeProblem.exact(*rm2, 3)
    from_polynomial = solve(problem, seed=SeedStrategy.POLYNOMIAL).as_array()
    from_homotopy = solve(problem, seed=SeedStrategy.HOMOTOPY).as_array()
    np.testing.assert_allclose(from_polynomial, from_homotopy, atol=1e-10)


def test_perturbed_seed_converges_back(coulomb):
    problem = BaeProblem.exact(*coulomb, 4)
    exact = solve(problem).as_array()
    seed = RootSet.from_array(exact * (1.0 + 1e-3 * np.array([1.0, -1.0, 1.0, -1.0])))
    np.testing.assert_allclose(solve(problem, seed=seed).as_array(), exact, rtol=1e-11)


def test_seed_of_wrong_size_is_rejected(coulomb):
    problem = BaeProblem.exact(*coulomb, 2)
    with pytest.raises(ValueError):
        solve(problem, seed=RootSet.from_array([0.1]))


def test_coincident_roots_are_singular(coulomb):
    problem = BaeProblem.exact(*coulomb, 2)
    with pytest.raises(SingularConfigurationError):
        residual(problem, [0.3, 0.3])


def test_exhausted_iterations_raise_with_best_iterate(coulomb):
    problem = BaeProblem.exact(*coulomb, 3)
    config = BaeSolverConfig(max_iterations=1)
    seed = RootSet.from_array([0.05, 0.9, 4.0])
    with pytest.raises(ConvergenceError) as excinfo:
        solve(problem, seed=seed, config=config)
    assert len(excinfo.value.best_iterate) == 3
    assert excinfo.value.exit_code == 3


def test_exact_problem_checks_the_level(eckart):
    with pytest.raises(LevelNotFoundError):
        BaeProblem.exact(*eckart, 2)


def _random_problem(flavor, rng):
    N = int(rng.integers(1, 6))
    gaps = rng.uniform(0.2, 1.0, size=N)
    if flavor is BaeFlavor.COULOMB_SINUSOIDAL:
        A, B = rng.uniform(0.5, 5.0, size=2)
        problem = BaeProblem.coulomb_sinusoidal(float(A), float(B), N)
        return problem, 0.1 + np.cumsum(gaps)
    roots = rng.uniform(-3.0, 0.0) + np.cumsum(gaps)
    if flavor is BaeFlavor.GENERAL_QES:
        lam = int(rng.choice([-1, 0, 1]))
        a1, a0 = rng.uniform(-6.0, 2.0), rng.uniform(-3.0, 3.0)
        return BaeProblem.general_qes(lam, a1, a0, N), roots
    if rng.random() < 0.5:
        params = ModelParams(A=rng.uniform(0.5, 5.0), B=rng.uniform(-5.0, 5.0))
        return BaeProblem.exact(ModelKind.ROSEN_MORSE_I, params, N), roots
    params = ModelParams(A=rng.uniform(0.5, 5.0), B=rng.uniform(0.5, 5.0))
    return BaeProblem.exact(ModelKind.COULOMB, params, N), roots


@pytest.mark.parametrize("flavor", list(BaeFlavor))
def test_jacobian_matches_finite_differences(flavor):
    rng = np.random.default_rng(11)
    h = 1e-6
    for _ in range(100):
        problem, z = _random_problem(flavor, rng)
        analytic = jacobian(problem, z)
        for j in range(z.size):
            step = np.zeros(z.size)
            step[j] = h
            ahead = np.asarray(residual(problem, z + step))
            behind = np.asarray(residual(problem, z - step))
            column = (ahead - behind) / (2 * h)
            np.testing.assert_allclose(analytic[:, j], column, rtol=1e-6, atol=1e-6)


def test_general_form_reduces_to_exact_form(rm2):
    kind, params = rm2
    a, b = raw_couplings(kind, params)
    N = 2
    exact = BaeProblem.exact(kind, params, N)
    general = BaeProblem.general_qes(kind.lam, -(a + N), b / (a + N), N)
    assert general.flavor is BaeFlavor.GENERAL_QES
    assert general.equivalent_raw_couplings() == pytest.approx((a, b))

    z = [-0.3, 0.5]
    np.testing.assert_allclose(
        residual_exact(exact, z), residual_general(general, z), atol=1e-14
    )
    np.testing.assert_allclose(
        solve(general).as_array(), solve(exact).as_array(), atol=1e-10
    )


@pytest.mark.parametrize("N", range(1, 7))
def test_sinusoidal_coulomb_sum_rule_and_reciprocity(N):
    params = ModelParams(A=2.5, B=3.0)
    problem = BaeProblem.coulomb_sinusoidal(params.A, params.B, N)
    assert problem.b == pytest.approx(3.0 / (2.5 + N))

    x = solve(problem)
    assert np.all(x.as_array() > 0)
    assert sum_rule_residual(problem, x) < 1e-10 * max(1.0, problem.b * N)

    z = solve_model(ModelKind.COULOMB, params, N).as_array()
    np.testing.assert_allclose(x.as_array(), np.sort(1.0 / z), rtol=1e-10)


def test_sinusoidal_form_requires_positive_couplings():
    with pytest.raises(ParameterValidationError):
        BaeProblem.coulomb_sinusoidal(1.0, -1.0, 2)


def test_seed_strategies_are_deterministic(rm1):
    problem = BaeProblem.exact(*rm1, 3)
    first = seed_strategy(problem, SeedStrategy.HOMOTOPY)
    second = seed_strategy(problem, SeedStrategy.HOMOTOPY)
    assert first == second
    assert first.N == 3


def test_general_quadratic_roots_from_a_grid_search():
    problem = BaeProblem.general_qes(0, -3.0, 1.0, 2)
    z = np.linspace(-3.0, 3.0, 1201)
    z1, z2 = np.meshgrid(z, z, indexing="ij")
    usable = z2 - z1 > 0.01
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = z1 ** 2 / (z1 - z2) - 2.0 * z1 + 1.0
        r2 = z2 ** 2 / (z2 - z1) - 2.0 * z2 + 1.0
    worst = np.where(usable, np.maximum(np.abs(r1), np.abs(r2)), np.inf)
    i, j = np.unravel_index(np.argmin(worst), worst.shape)
    coarse = np.array([z1[i, j], z2[i, j]])

    polished = solve(problem, seed=RootSet.from_array(coarse))
    np.testing.assert_allclose(polished.as_array(), coarse, atol=0.02)
    assert all(abs(r) < 1e-8 for r in residual_general(problem, polished))
    default = solve(problem).as_array()
    np.testing.assert_allclose(polished.as_array(), default, atol=1e-10)
    closed_form = [1.0 - 3.0 ** -0.5, 1.0 + 3.0 ** -0.5]
    np.testing.assert_allclose(polished.as_array(), closed_form, atol=1e-12)


def test_converged_residual_is_below_the_absolute_tolerance(case):
    for N in range(1, case.n_max + 1):
        problem = BaeProblem.exact(case.kind, case.params, N)
        roots = solve(problem)
        assert roots.residual_norm <= 1e-12
        assert max(abs(r) for r in residual(problem, roots)) <= 1e-12


def test_large_terms_converge_relative_to_their_size():
    problem = BaeProblem.exact(ModelKind.ECKART, ModelParams(A=2.0, B=2000.0), 2)
    roots = solve(problem)
    assert roots_admissible(ModelKind.ECKART, roots)
    assert residual_scale(problem, roots) > 45.0
    assert roots.residual_norm <= 1e-12 * residual_scale(problem, roots)


def test_nearly_coincident_roots_are_singular(coulomb):
    problem = BaeProblem.exact(*coulomb, 2)
    with pytest.raises(SingularConfigurationError):
        residual(problem, [0.3, 0.3 + 1e-11])
    assert len(residual(problem, [0.3, 0.3 + 1e-9])) == 2


def test_degenerate_events_are_capped(coulomb):
    problem = BaeProblem.exact(*coulomb, 2)
    config = BaeSolverConfig(max_degenerate_events=1)
    with pytest.raises(SingularConfigurationError):
        solve(problem, seed=RootSet.from_array([0.3, 0.3]), config=config)


def test_symmetric_rm1_root_is_positive_zero():
    roots = solve_model(ModelKind.ROSEN_MORSE_I, ModelParams(A=1.0, B=0.0), 1)
    assert roots.roots == [0.0]
    assert math.copysign(1.0, roots.roots[0]) == 1.0
    assert math.copysign(1.0, RootSet.from_array([-0.0]).roots[0]) == 1.0
