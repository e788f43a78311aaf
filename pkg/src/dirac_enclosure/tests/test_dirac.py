"""Tests for dirac_enclosure.utils.dirac."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dirac_enclosure.exceptions import ConfigurationError
from dirac_enclosure.utils.dirac import (
    REPRESENTATIONS,
    anticommutation_residual,
    dirac_basis,
    hermiticity_residual,
    hs_norm,
    operator_norm,
    trace_residual,
)


@pytest.mark.parametrize('representation', REPRESENTATIONS)
def test_clifford_relations(representation):
    basis = dirac_basis(representation)
    assert basis.alpha.shape == (4, 4, 4)
    assert anticommutation_residual(basis) <= 1e-14
    assert trace_residual(basis) <= 1e-14
    assert hermiticity_residual(basis) <= 1e-14


def test_standard_representation_layout():
    basis = dirac_basis('standard')
    np.testing.assert_array_equal(basis.mass, np.diag([1, 1, -1, -1]))
    # alpha_3 couples the upper and lower spinor halves
    np.testing.assert_array_equal(basis.spatial[2][:2, :2], np.zeros((2, 2)))
    np.testing.assert_array_equal(basis.spatial[2][:2, 2:], np.diag([1, -1]))


def test_basis_is_read_only():
    basis = dirac_basis('weyl')
    with pytest.raises(ValueError, match='read-only'):
        basis.alpha[0, 0, 0] = 2


def test_unknown_representation():
    with pytest.raises(ConfigurationError, match='majorana'):
        dirac_basis('majorana')


def test_dot_matches_explicit_sum():
    basis = dirac_basis('standard')
    d = np.array([0.3, -1.2, 2.0])
    expected = sum(d[k] * basis.spatial[k] for k in range(3))
    np.testing.assert_allclose(basis.dot(d), expected, atol=1e-15)


def test_hs_norm_examples():
    assert hs_norm(np.eye(4)) == 2.0
    assert hs_norm(np.zeros((4, 4))) == 0.0
    stack = np.stack([np.eye(4), 3j * np.eye(4)])
    np.testing.assert_allclose(hs_norm(stack), [2.0, 6.0])
    assert hs_norm(dirac_basis('standard').spatial[0]) == pytest.approx(2.0, rel=1e-15)


def test_hs_norm_is_unitarily_invariant(rng):
    for _ in range(50):
        matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        left, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        right, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        assert hs_norm(left @ matrix @ right) == pytest.approx(hs_norm(matrix), rel=1e-12)


def test_operator_norm_against_svd(rng):
    for _ in range(200):
        matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        expected = np.linalg.norm(matrix, 2)
        assert operator_norm(matrix) == pytest.approx(expected, rel=1e-10)


def test_operator_norm_stack(rng):
    stack = rng.standard_normal((3, 5, 4, 4)) + 1j * rng.standard_normal((3, 5, 4, 4))
    values = operator_norm(stack)
    assert values.shape == (3, 5)
    np.testing.assert_allclose(values, np.linalg.norm(stack, 2, axis=(-2, -1)), rtol=1e-10)


def test_operator_norm_special_matrices():
    assert operator_norm(np.zeros((4, 4))) == 0.0
    assert operator_norm((3 - 4j) * np.eye(4)) == pytest.approx(5.0, rel=1e-14)
    assert operator_norm(np.diag([1.0, -3.0, 2.0, 0.5])) == pytest.approx(3.0, rel=1e-14)
    # a Dirac matrix is unitary
    assert operator_norm(dirac_basis('weyl').spatial[1]) == pytest.approx(1.0, rel=1e-14)
    # repeated top singular value
    assert operator_norm(np.diag([2.0, 2.0, 1.0, 0.0])) == pytest.approx(2.0, rel=1e-14)


def test_operator_norm_mixed_stack():
    stack = np.stack([np.zeros((4, 4)), 5 * np.eye(4)])
    np.testing.assert_allclose(operator_norm(stack), [0.0, 5.0])


@pytest.mark.parametrize('shape', [(4,), (3, 3), (2, 4, 3)])
def test_norms_reject_bad_shapes(shape):
    with pytest.raises(ValueError, match='4x4'):
        hs_norm(np.ones(shape))
    with pytest.raises(ValueError, match='4x4'):
        operator_norm(np.ones(shape))


@settings(max_examples=200, deadline=None)
@given(arrays(np.int8, (4, 4), elements=st.integers(-20, 20)))
def test_operator_norm_between_hs_bounds(entries):
    matrix = entries.astype(complex)
    op = operator_norm(matrix)
    hs = hs_norm(matrix)
    assert op <= hs * (1 + 1e-12)
    assert hs <= 2 * op * (1 + 1e-12)
