"""
Tests for Laguerre/Jacobi evaluation and companion-matrix roots.
"""

import math

import numpy as np
import pytest

from prepotential.core.exceptions import LevelNotFoundError, OrthopolyError
from prepotential.core.models import ModelKind, ModelParams
from prepotential.core.orthopoly import (
    JacobiParams,
    LaguerreParams,
    bae_roots_via_polynomials,
    jacobi_derivative,
    jacobi_eval,
    jacobi_params_for,
    jacobi_roots,
    laguerre_derivative,
    laguerre_eval,
    laguerre_params_for,
    laguerre_roots,
    roots_for_couplings,
    stieltjes_residual_jacobi,
    stieltjes_residual_laguerre,
)


def test_laguerre_low_degrees():
    a, y = 0.5, 0.7
    assert laguerre_eval(LaguerreParams(n=0, a=a), y) == pytest.approx(1.0)
    assert laguerre_eval(LaguerreParams(n=1, a=a), y) == pytest.approx(1.0 + a - y)
    expected = (a + 1) * (a + 2) / 2 - (a + 2) * y + y * y / 2
    assert laguerre_eval(LaguerreParams(n=2, a=a), y) == pytest.approx(expected)


def test_jacobi_degree_one():
    p = JacobiParams(n=1, alpha=0.3, beta=-0.4)
    z = 0.25
    expected = (0.3 + 1) + (0.3 - 0.4 + 2) * (z - 1) / 2
    value = jacobi_eval(p, z)
    assert isinstance(value, float)
    assert value == pytest.approx(expected)


def test_jacobi_complex_parameters_give_complex_values():
    p = JacobiParams(n=2, alpha=-2.5 + 0.5j, beta=-2.5 - 0.5j)
    assert not p.is_real
    assert isinstance(jacobi_eval(p, 0.3), complex)


def test_derivatives_match_finite_differences():
    h = 1e-6
    lp = LaguerreParams(n=4, a=1.5)
    slope = (laguerre_eval(lp, 2.0 + h) - laguerre_eval(lp, 2.0 - h)) / (2 * h)
    assert laguerre_derivative(lp, 2.0) == pytest.approx(slope, rel=1e-6)

    jp = JacobiParams(n=3, alpha=0.5, beta=1.5)
    slope = (jacobi_eval(jp, 0.2 + h) - jacobi_eval(jp, 0.2 - h)) / (2 * h)
    assert jacobi_derivative(jp, 0.2) == pytest.approx(slope, rel=1e-6)


def test_laguerre_roots_of_degree_two():
    roots = laguerre_roots(LaguerreParams(n=2, a=0.0))
    assert roots == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)], rel=1e-14)


def test_legendre_roots():
    roots = jacobi_roots(JacobiParams(n=2, alpha=0.0, beta=0.0))
    expected = [-1 / math.sqrt(3), 1 / math.sqrt(3)]
    np.testing.assert_allclose(np.real(roots), expected, atol=1e-14)
    np.testing.assert_allclose(np.imag(roots), 0.0, atol=1e-14)


def test_laguerre_roots_require_index_above_minus_one():
    with pytest.raises(OrthopolyError):
        laguerre_roots(LaguerreParams(n=3, a=-1.0))


def test_roots_satisfy_stieltjes_relations():
    lp = LaguerreParams(n=6, a=2.0)
    assert stieltjes_residual_laguerre(lp, laguerre_roots(lp)) < 1e-10

    jp = JacobiParams(n=5, alpha=1.0, beta=2.5)
    assert stieltjes_residual_jacobi(jp, jacobi_roots(jp)) < 1e-10


def test_model_parameter_mapping():
    params = ModelParams(A=2.5, B=3.0)
    expected = LaguerreParams(n=2, a=4.0)
    assert laguerre_params_for(ModelKind.COULOMB, params, 2) == expected
    assert laguerre_params_for(ModelKind.ECKART, params, 2) is None
    assert jacobi_params_for(ModelKind.COULOMB, params, 2) is None
    assert jacobi_params_for(ModelKind.ECKART, ModelParams(A=2.0, B=16.0), 1).is_real


def test_single_roots_from_polynomials():
    eckart = bae_roots_via_polynomials(ModelKind.ECKART, ModelParams(A=2.0, B=16.0), 1)
    assert eckart.roots == pytest.approx([8.0 / 3.0], rel=1e-12)

    coulomb = bae_roots_via_polynomials(ModelKind.COULOMB, ModelParams(A=1.0, B=1.0), 1)
    assert coulomb.roots == pytest.approx([0.5], rel=1e-12)

    symmetric = bae_roots_via_polynomials(
        ModelKind.ROSEN_MORSE_I, ModelParams(A=1.0, B=0.0), 1
    )
    assert symmetric.roots == pytest.approx([0.0], abs=1e-12)


def test_rm1_roots_are_real():
    z = roots_for_couplings(-1, 1.5, -2.0, 4)
    assert z.dtype == float
    assert np.all(np.diff(z) > 0)


def test_unbound_level_has_no_polynomial_roots():
    with pytest.raises(LevelNotFoundError):
        bae_roots_via_polynomials(ModelKind.ECKART, ModelParams(A=2.0, B=16.0), 2)


def test_empty_level():
    params = ModelParams(A=1.0, B=1.0)
    assert bae_roots_via_polynomials(ModelKind.COULOMB, params, 0).roots == []
