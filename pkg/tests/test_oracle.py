"""
Tests for the finite-difference eigensolver.
"""

import math

import numpy as np
import pytest

from prepotential.core.exceptions import LevelNotFoundError
from prepotential.core.grid import Grid
from prepotential.core.models import ModelKind, ModelParams, eigenvalue
from prepotential.core.oracle import (
    OracleConfig,
    TridiagonalOperator,
    compare,
    convergence_ratios,
    lowest_eigenvalues,
    oracle_grid,
    sturm_count,
    truncation_sensitivity,
)


@pytest.fixture
def free_pair():
    return TridiagonalOperator.from_potential(1.0, np.zeros(2))


def test_two_by_two_eigenvalues(free_pair):
    assert free_pair.size == 2
    assert lowest_eigenvalues(free_pair, 2) == pytest.approx([1.0, 3.0])
    assert lowest_eigenvalues(free_pair, 0) == []


def test_sturm_count(free_pair):
    assert sturm_count(free_pair, 0.0) == 0
    assert sturm_count(free_pair, 2.0) == 1
    assert sturm_count(free_pair, 4.0) == 2


def test_eigenvalue_request_limits(free_pair):
    with pytest.raises(ValueError):
        lowest_eigenvalues(free_pair, 3)
    with pytest.raises(ValueError):
        lowest_eigenvalues(free_pair, 2, max_levels=1)


@pytest.mark.slow
def test_compare_with_closed_form(case):
    n_max = case.n_max
    report = compare(case.kind, case.params, n_max)
    assert [level.N for level in report.levels] == list(range(n_max + 1))
    assert report.max_rel_err < 1e-3
    for level in report.levels:
        assert level.closed_form == eigenvalue(case.kind, case.params, level.N)


@pytest.mark.slow
def test_richardson_improves_the_estimate(rm2):
    plain = compare(*rm2, 2)
    extrapolated = compare(*rm2, 2, richardson=True)
    assert all(level.extrapolated is not None for level in extrapolated.levels)
    assert extrapolated.max_rel_err < plain.max_rel_err


def test_second_order_convergence(rm2):
    ratios = convergence_ratios(*rm2, 3)
    assert len(ratios) == 4
    assert all(3.5 <= ratio <= 4.5 for ratio in ratios)


def test_truncation_is_insensitive(rm2, eckart):
    for kind, params, n_max in (rm2 + (3,), eckart + (1,)):
        report = truncation_sensitivity(kind, params, n_max)
        for N, shift in enumerate(report.shifts):
            assert shift < 0.5e-3 * abs(eigenvalue(kind, params, N))


def test_unbound_level_is_rejected(eckart):
    with pytest.raises(LevelNotFoundError):
        compare(*eckart, 2)


def test_too_few_points_are_rejected(coulomb):
    config = OracleConfig(grid=Grid(xmin=1e-3, xmax=30.0, points=25), levels=4)
    with pytest.raises(ValueError):
        compare(*coulomb, 3, config=config)


def test_rm1_grid_is_symmetric(rm1):
    grid = oracle_grid(*rm1, 3, points=1001)
    assert grid.xmin > 0
    assert grid.xmin == pytest.approx(math.pi - grid.xmax)
    assert grid.xmin == pytest.approx(10.0 * grid.spacing)


def test_rm2_grid_straddles_the_well(rm2):
    grid = oracle_grid(*rm2, 3)
    assert grid.xmin < 0.0 < grid.xmax


def test_coulomb_grid_starts_at_the_singular_end():
    grid = oracle_grid(ModelKind.COULOMB, ModelParams(A=1.0, B=1.0), 3)
    assert grid.xmin == pytest.approx(1e-6)
