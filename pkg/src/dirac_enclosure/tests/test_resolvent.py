"""Tests for dirac_enclosure.utils.resolvent."""

import numpy as np
import pytest

from dirac_enclosure.exceptions import DomainError
from dirac_enclosure.utils.constants import C1, C2_TILDE
from dirac_enclosure.utils.dirac import REPRESENTATIONS, dirac_basis, hs_norm
from dirac_enclosure.utils.resolvent import (
    SpectralPoint,
    hs_bound,
    hs_bound_uniform,
    hs_closed_form,
    intermediate_matrix,
    kappa,
    kernel,
    principal_kappa,
    traceless_part,
)


def _random_points(rng, count):
    for _ in range(count):
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        yield SpectralPoint(z, rng.uniform(0, 5))


@pytest.mark.parametrize(
    ('z', 'm', 'expected'),
    [
        (0, 1, 1),
        (2j, 0, 2),
        (0.5, 1, np.sqrt(0.75)),
        (2, 1, np.sqrt(3) * 1j),
        (-2, 1, np.sqrt(3) * 1j),
        (1, 1, 0),
    ],
)
def test_kappa_examples(z, m, expected):
    assert kappa(SpectralPoint(z, m)) == pytest.approx(expected, abs=1e-15)


def test_kappa_has_nonnegative_real_part(rng):
    z = rng.uniform(-10, 10, 5000) + 1j * rng.uniform(-10, 10, 5000)
    m = rng.uniform(0, 5, 5000)
    values = principal_kappa(z, m)
    assert np.all(values.real >= 0)
    np.testing.assert_allclose(values**2, m**2 - z**2, rtol=1e-12, atol=1e-12)


def test_kappa_positive_off_the_spectrum(rng):
    for point in _random_points(rng, 500):
        assert point.is_resolvent_point
        assert point.kappa.real > 0


def test_spectral_point_validation():
    with pytest.raises(DomainError, match='mass'):
        SpectralPoint(1j, -1)
    with pytest.raises(DomainError, match='finite'):
        SpectralPoint(complex(np.inf, 0), 1)
    assert not SpectralPoint(1, 1).is_resolvent_point
    assert not SpectralPoint(-3, 1).is_resolvent_point
    assert SpectralPoint(0.5, 1).is_resolvent_point
    assert SpectralPoint(2 + 1e-9j, 1).is_resolvent_point
    assert SpectralPoint(2 + 3j, 1).conjugate() == SpectralPoint(2 - 3j, 1)


def test_kernel_rejects_coincident_points():
    with pytest.raises(DomainError, match='coincident'):
        kernel(SpectralPoint(1j, 1), np.ones(3), np.ones(3))


@pytest.mark.parametrize(('z', 'm'), [(2, 1), (1, 1), (-1.5, 0), (0, 0)])
def test_kernel_on_the_spectrum(z, m):
    point = SpectralPoint(z, m)
    if z == 0 and m == 0:
        # kappa = 0 is unambiguous at the massless origin
        value = kernel(point, np.array([1.0, 0, 0]), np.zeros(3)).matrix
        assert np.all(np.isfinite(value))
        return
    with pytest.raises(DomainError, match='spectrum'):
        kernel(point, np.array([1.0, 0, 0]), np.zeros(3))


@pytest.mark.parametrize('representation', REPRESENTATIONS)
def test_hs_norm_oracle(rng, representation):
    basis = dirac_basis(representation)
    for point in _random_points(rng, 300):
        x, xp = rng.normal(scale=2.0, size=(2, 3))
        value = hs_norm(kernel(point, x, xp, basis=basis).matrix) ** 2
        expected = hs_closed_form(point, np.linalg.norm(x - xp))
        assert value == pytest.approx(expected, rel=1e-12)


def test_hs_norm_massless_origin():
    point = SpectralPoint(0, 0)
    for r in (0.1, 1.0, 7.0):
        value = hs_norm(kernel(point, np.array([0, 0, r]), np.zeros(3)).matrix) ** 2
        assert value == pytest.approx(1 / (4 * np.pi**2 * r**4), rel=1e-13)


def test_kernel_vectorized(rng):
    point = SpectralPoint(0.3 + 0.7j, 1.2)
    x = rng.normal(size=(6, 3))
    result = kernel(point, x, np.zeros(3))
    assert result.matrix.shape == (6, 4, 4)
    for row, matrix in zip(x, result.matrix, strict=True):
        np.testing.assert_allclose(
            kernel(point, row, np.zeros(3)).matrix, matrix, rtol=1e-13, atol=1e-16
        )


def test_kernel_adjoint_identity(rng):
    for point in _random_points(rng, 100):
        x, xp = rng.normal(size=(2, 3))
        forward = kernel(point, x, xp).matrix
        backward = kernel(point.conjugate(), xp, x).matrix
        np.testing.assert_allclose(forward.conj().T, backward, rtol=1e-12, atol=1e-15)


def test_kernel_factorization(rng):
    for point in _random_points(rng, 100):
        d = rng.normal(size=3)
        r = np.linalg.norm(d)
        amat = intermediate_matrix(point, d)
        expected = amat * np.exp(-point.kappa * r) / (4 * np.pi * r**3)
        np.testing.assert_allclose(
            kernel(point, d, np.zeros(3)).matrix, expected, rtol=1e-12, atol=1e-15
        )


@pytest.mark.parametrize('representation', REPRESENTATIONS)
def test_traceless_part(rng, representation):
    basis = dirac_basis(representation)
    for point in _random_points(rng, 100):
        d = rng.normal(size=3)
        b = traceless_part(point, d, basis=basis)
        scale = np.abs(intermediate_matrix(point, d, basis=basis)).max() ** 2
        assert abs(np.trace(b)) <= 1e-12 * scale


def test_bounds_dominate(rng):
    for point in _random_points(rng, 200):
        r = 10.0 ** rng.uniform(-3, 2, 50)
        exact = hs_closed_form(point, r)
        bound = hs_bound(point, r)
        uniform = hs_bound_uniform(point, r)
        assert np.all(bound >= exact)
        assert np.all(uniform >= bound * (1 - 1e-12))


def test_bounds_on_the_spectrum():
    point = SpectralPoint(3.0, 1.0)
    r = np.array([0.01, 1.0, 50.0])
    assert np.all(hs_bound(point, r) >= hs_closed_form(point, r))
    assert np.all(np.isinf(hs_bound_uniform(point, r)))
    # purely imaginary: the uniform bound is c1^2 / r^4
    assert hs_bound_uniform(SpectralPoint(4j, 2.0), 2.0) == pytest.approx(C1**2 / 16)


def test_uniform_bound_coefficient():
    point = SpectralPoint(1 + 1j, 0.0)
    rho = point.kappa.real
    expected = (C1**2 + C2_TILDE**2 / rho**2) / 3.0**4
    assert hs_bound_uniform(point, 3.0) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize('func', [hs_closed_form, hs_bound, hs_bound_uniform])
def test_nonpositive_radius(func):
    with pytest.raises(DomainError):
        func(SpectralPoint(1j, 1), 0.0)
    with pytest.raises(DomainError):
        func(SpectralPoint(1j, 1), np.array([1.0, -1.0]))


def test_closed_form_example():
    # kappa = 4 at z = 3, m = 5
    expected = 4 * np.exp(-16) / ((4 * np.pi) ** 2 * 16) * (1 + 16 + 2 * 25 * 4)
    assert hs_closed_form(SpectralPoint(3, 5), 2.0) == pytest.approx(expected, rel=1e-14)


def test_massless_origin_kernel():
    alpha1 = dirac_basis('standard').spatial[0]
    value = kernel(SpectralPoint(0, 0), np.array([1.0, 0, 0]), np.zeros(3)).matrix
    np.testing.assert_allclose(np.abs(value), np.abs(alpha1) / (4 * np.pi), atol=1e-16)
    assert hs_norm(value) == pytest.approx(2 / (4 * np.pi), rel=1e-14)


def test_bound_on_the_imaginary_axis():
    point = SpectralPoint(2j, 1.0)
    assert hs_bound(point, 2.0) == pytest.approx(C1**2 / 16, rel=1e-14)
