"""
Tests for the closed-form model layer.
"""

import math

import numpy as np
import pytest

from prepotential.core.exceptions import (
    DomainError,
    LevelNotFoundError,
    ParameterValidationError,
)
from prepotential.core.models import (
    HydrogenMapping,
    ModelKind,
    ModelParams,
    bound_state_count,
    continuum_threshold,
    coordinate,
    coordinate_derivative,
    eigenvalue,
    jacobi_parameters,
    potential,
    qes_potential,
    raw_couplings,
    spectral_level,
    superpotential,
    susy_eigenvalue,
    susy_potential,
    validate,
)

SAMPLE_X = {
    ModelKind.COULOMB: 1.3,
    ModelKind.ECKART: 0.8,
    ModelKind.ROSEN_MORSE_II: 0.4,
    ModelKind.ROSEN_MORSE_I: 1.1,
}


def test_coulomb_spectrum(coulomb):
    kind, params = coulomb
    energies = [eigenvalue(kind, params, N) for N in range(3)]
    assert energies == pytest.approx([-1.0, -0.25, -1.0 / 9.0], rel=1e-15)


def test_coulomb_potential_value(coulomb):
    kind, params = coulomb
    assert potential(kind, params, 1.0) == pytest.approx(-2.0)
    values = potential(kind, params, np.array([0.5, 2.0]))
    assert isinstance(values, np.ndarray)
    np.testing.assert_allclose(values, [-4.0, -1.0])


def test_validate_reports_violations():
    result = validate(ModelKind.COULOMB, ModelParams(A=-1.0, B=1.0))
    assert not result.ok
    assert "A > 0" in result.violations

    result = validate(ModelKind.ROSEN_MORSE_II, ModelParams(A=5.0, B=25.0))
    assert not result.ok
    assert "|B| < A²" in result.violations

    assert validate(ModelKind.ECKART, ModelParams(A=2.0, B=3.0)).ok


def test_bound_state_counts():
    assert bound_state_count(ModelKind.ECKART, ModelParams(A=2.0, B=3.0)) == 0
    assert bound_state_count(ModelKind.ECKART, ModelParams(A=2.0, B=16.0)) == 2
    assert bound_state_count(ModelKind.ROSEN_MORSE_II, ModelParams(A=5.0, B=3.0)) == 4
    assert math.isinf(bound_state_count(ModelKind.COULOMB, ModelParams(A=1.0, B=1.0)))
    rm1 = ModelParams(A=1.5, B=-2.0)
    assert math.isinf(bound_state_count(ModelKind.ROSEN_MORSE_I, rm1))


def test_bound_state_count_rejects_invalid_parameters():
    with pytest.raises(ParameterValidationError) as excinfo:
        bound_state_count(ModelKind.COULOMB, ModelParams(A=1.0, B=-1.0))
    assert excinfo.value.violations == ["B > 0"]
    assert excinfo.value.exit_code == 2


def test_levels_beyond_count_are_rejected(eckart):
    kind, params = eckart
    eigenvalue(kind, params, 1)
    with pytest.raises(LevelNotFoundError):
        eigenvalue(kind, params, 2)


def test_bound_levels_lie_below_continuum(eckart, rm2):
    for kind, params in (eckart, rm2):
        threshold = continuum_threshold(kind, params)
        count = bound_state_count(kind, params)
        assert all(eigenvalue(kind, params, N) < threshold for N in range(count))
    assert continuum_threshold(*eckart) == pytest.approx(-30.0)
    assert continuum_threshold(*rm2) == pytest.approx(24.0)
    rm1 = ModelParams(A=1.5, B=2.0)
    assert math.isinf(continuum_threshold(ModelKind.ROSEN_MORSE_I, rm1))


def test_spectrum_increases_with_level(case):
    count = bound_state_count(case.kind, case.params)
    levels = [eigenvalue(case.kind, case.params, N) for N in range(int(min(count, 8)))]
    assert len(levels) >= case.n_max + 1
    assert all(lower < upper for lower, upper in zip(levels, levels[1:]))


def test_eckart_at_the_binding_edge_has_no_levels():
    params = ModelParams(A=2.0, B=4.0)
    assert validate(ModelKind.ECKART, params).ok
    assert bound_state_count(ModelKind.ECKART, params) == 0
    with pytest.raises(LevelNotFoundError):
        eigenvalue(ModelKind.ECKART, params, 0)


def test_susy_ground_state_is_zero(case):
    assert susy_eigenvalue(case.kind, case.params, 0) == 0.0


def test_rm2_spectrum_is_even_in_b():
    params = ModelParams(A=5.0, B=3.0)
    mirrored = ModelParams(A=5.0, B=-3.0)
    for N in range(4):
        assert eigenvalue(ModelKind.ROSEN_MORSE_II, params, N) == eigenvalue(
            ModelKind.ROSEN_MORSE_II, mirrored, N
        )


@pytest.mark.parametrize("kind", list(ModelKind))
def test_coordinate_satisfies_riccati_relation(kind):
    x, h = SAMPLE_X[kind], 1e-5
    slope = (coordinate(kind, x + h) - coordinate(kind, x - h)) / (2 * h)
    z = coordinate(kind, x)
    assert slope == pytest.approx(coordinate_derivative(kind, z), rel=1e-7)


RANDOM_WINDOWS = {
    ModelKind.COULOMB: (0.2, 5.0),
    ModelKind.ECKART: (0.2, 3.0),
    ModelKind.ROSEN_MORSE_II: (-3.0, 3.0),
    ModelKind.ROSEN_MORSE_I: (0.2, math.pi - 0.2),
}


@pytest.mark.parametrize("kind", list(ModelKind))
def test_riccati_relation_at_random_points(kind):
    rng = np.random.default_rng(17)
    x = rng.uniform(*RANDOM_WINDOWS[kind], size=50)
    exact = np.asarray(coordinate_derivative(kind, coordinate(kind, x)))
    errors = []
    for h in (1e-4, 5e-5):
        ahead = np.asarray(coordinate(kind, x + h))
        behind = np.asarray(coordinate(kind, x - h))
        slope = (ahead - behind) / (2 * h)
        errors.append(np.abs(slope - exact))
    assert np.all(errors[0] < 1e-6 * np.abs(exact) + 1e-9)
    assert np.all(errors[1] <= errors[0] + 1e-9 * np.abs(exact) + 1e-10)


@pytest.mark.parametrize(
    "kind,x",
    [
        (ModelKind.COULOMB, 0.0),
        (ModelKind.ROSEN_MORSE_I, math.pi),
        (ModelKind.ECKART, -1.0),
    ],
)
def test_coordinate_rejects_points_outside_domain(kind, x):
    with pytest.raises(DomainError):
        coordinate(kind, x)


def test_case_superpotential_reproduces_susy_potential(case):
    kind, params = case.kind, case.params
    x, h = SAMPLE_X[kind], 1e-5
    w1 = superpotential(kind, params, x)
    ahead = superpotential(kind, params, x + h)
    behind = superpotential(kind, params, x - h)
    w2 = (ahead - behind) / (2 * h)
    expected = susy_potential(kind, params, x)
    assert w1 * w1 - w2 == pytest.approx(expected, rel=1e-6, abs=1e-6)


def test_raw_couplings_sign_conventions():
    params = ModelParams(A=2.0, B=3.0)
    assert raw_couplings(ModelKind.COULOMB, params) == (2.0, 3.0)
    assert raw_couplings(ModelKind.ECKART, params) == (2.0, 3.0)
    assert raw_couplings(ModelKind.ROSEN_MORSE_II, params) == (-2.0, -3.0)
    assert raw_couplings(ModelKind.ROSEN_MORSE_I, params) == (2.0, -3.0)


def test_qes_potential_matches_exact_family(case):
    kind, params = case.kind, case.params
    a, b = raw_couplings(kind, params)
    x = SAMPLE_X[kind]
    z = coordinate(kind, x)
    for N in range(case.n_max + 1):
        value = qes_potential(kind.lam, -(a + N), b / (a + N), N, z)
        expected = potential(kind, params, x) - eigenvalue(kind, params, N)
        assert value == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_jacobi_parameters_per_model():
    assert jacobi_parameters(ModelKind.COULOMB, ModelParams(A=1.0, B=1.0), 2) is None

    alpha, beta = jacobi_parameters(ModelKind.ECKART, ModelParams(A=2.0, B=16.0), 1)
    assert alpha == pytest.approx(-3.0 + 16.0 / 3.0)
    assert beta == pytest.approx(-3.0 - 16.0 / 3.0)

    rm1 = ModelParams(A=1.5, B=2.0)
    alpha, beta = jacobi_parameters(ModelKind.ROSEN_MORSE_I, rm1, 1)
    assert alpha == pytest.approx(beta.conjugate())
    assert alpha.imag != 0.0


def test_spectral_level_carries_polynomial_parameters(coulomb):
    level = spectral_level(*coulomb, 2)
    assert level.N == 2
    assert level.energy == pytest.approx(-1.0 / 9.0)
    assert level.laguerre_gamma == pytest.approx(2.0)
    assert level.jacobi_alpha is None


def test_hydrogen_mapping_reproduces_coulomb_energies():
    mapping = HydrogenMapping(l=0, e_squared=2.0)
    params = mapping.to_params()
    assert (params.A, params.B) == (1.0, 1.0)
    for N in range(4):
        expected = eigenvalue(ModelKind.COULOMB, params, N)
        assert mapping.energy(N) == pytest.approx(expected)
    assert mapping.scaled_variable(3.0, 2) == pytest.approx(2.0)
