r"""Integral kernel of the free Dirac resolvent in three dimensions.

For a spectral point ``z`` and mass ``m`` the resolvent ``(H_0 - z)^{-1}`` of
``H_0 = -i alpha . grad + m alpha_4`` has the kernel

.. math::

    G_z(x, x') = \frac{e^{-\kappa r}}{4\pi r}
        \Big[ i\frac{\alpha\cdot d}{r^2} + \kappa\, i\frac{\alpha\cdot d}{r}
        + m\alpha_4 + z \Big],
    \qquad d = x - x',\ r = |d|,\ \kappa = \sqrt{m^2 - z^2},

with the principal branch of the square root. This module evaluates the kernel, the closed
form of its pointwise Hilbert-Schmidt norm and the elementary upper bounds on that norm.
"""

import logging
from dataclasses import dataclass

import numpy as np

from dirac_enclosure.exceptions import DomainError
from dirac_enclosure.utils.constants import C1, C2, C2_TILDE
from dirac_enclosure.utils.dirac import dirac_basis

LGR = logging.getLogger(__name__)

FOUR_PI = 4 * np.pi


@dataclass(frozen=True)
class SpectralPoint:
    """A spectral parameter ``z`` together with the mass ``m >= 0`` of the free operator."""

    z: complex
    m: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'z', complex(self.z))
        object.__setattr__(self, 'm', float(self.m))
        if not np.isfinite(self.m) or self.m < 0:
            raise DomainError(f'The mass must be a finite nonnegative number, got {self.m}.')
        if not (np.isfinite(self.z.real) and np.isfinite(self.z.imag)):
            raise DomainError(f'The spectral point must be finite, got {self.z}.')

    @property
    def is_resolvent_point(self):
        """Whether ``z`` lies off the spectrum ``(-inf, -m] U [m, inf)`` of ``H_0``."""
        return not (self.z.imag == 0 and abs(self.z.real) >= self.m)

    @property
    def kappa(self):
        """Shorthand for :func:`kappa`."""
        return kappa(self)

    def conjugate(self):
        """The mirrored point ``(conj(z), m)``."""
        return SpectralPoint(self.z.conjugate(), self.m)


@dataclass(frozen=True, eq=False)
class KernelEval:
    """Resolvent kernel value(s) at one or several displacements."""

    matrix: np.ndarray
    """Kernel matrices of shape (..., 4, 4), in units of 1/length**2."""
    displacement: np.ndarray
    """Displacements ``x - x'`` of shape (..., 3)."""
    kappa: complex
    """The decay rate ``sqrt(m**2 - z**2)`` (principal branch)."""


def principal_kappa(z, m):
    """Vectorized principal square root of ``m**2 - z**2``.

    Negative real radicands are taken from the upper side of the cut, so that the result
    has a nonnegative imaginary part there. The real part is always nonnegative.

    Parameters
    ----------
    z : complex or array_like of complex
    m : float or array_like of float

    Returns
    -------
    numpy.ndarray of complex
    """
    z = np.asarray(z, dtype=complex)
    m = np.asarray(m, dtype=float)
    radicand = m**2 - z**2
    # a signed zero imaginary part would select the lower lip of the cut
    radicand = np.where(radicand.imag == 0, radicand.real + 0j, radicand)
    return np.sqrt(radicand)


def kappa(point):
    """Principal branch ``sqrt(m**2 - z**2)`` at a :class:`SpectralPoint`.

    >>> kappa(SpectralPoint(0, 1))
    (1+0j)
    >>> kappa(SpectralPoint(2j, 0))
    (2+0j)

    """
    return complex(principal_kappa(point.z, point.m))


def _check_radii(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError('The distance |x - x\'| must be strictly positive.')
    return r


def _scalar_or_array(values):
    return float(values) if np.ndim(values) == 0 else values


def _check_kernel_point(point):
    massless_origin = point.z == 0 and point.m == 0
    if not (point.is_resolvent_point or massless_origin):
        raise DomainError(
            f'z = {point.z} lies in the spectrum (-inf, -{point.m}] U [{point.m}, inf) of the '
            'free operator; the kernel is only evaluated at resolvent points.'
        )


def kernel(point, x, xp, basis=None):
    """Evaluate the resolvent kernel at pairs of points.

    Parameters
    ----------
    point : :class:`SpectralPoint`
        Must be a resolvent point. The massless origin ``z = 0, m = 0`` is accepted
        as well, since ``kappa = 0`` is unambiguous there.
    x, xp : array_like of shape (3,) or (..., 3)
        Broadcastable arrays of positions.
    basis : :class:`~dirac_enclosure.utils.dirac.DiracBasis`, optional
        Dirac matrices to use (the standard representation by default).

    Returns
    -------
    :class:`KernelEval`

    Raises
    ------
    DomainError
        If any pair of points coincides, or ``z`` lies in the spectrum of ``H_0``.
    """
    _check_kernel_point(point)
    basis = basis or dirac_basis('standard')

    displacement = np.asarray(x, dtype=float) - np.asarray(xp, dtype=float)
    r = np.linalg.norm(displacement, axis=-1)
    if np.any(r == 0):
        raise DomainError('The resolvent kernel is singular at coincident points x = x\'.')

    k = kappa(point)
    alpha_d = basis.dot(displacement)
    radial = np.asarray(1j * (1 + k * r) / r**2)[..., None, None]
    bracket = radial * alpha_d + point.m * basis.mass + point.z * np.eye(4)
    prefactor = np.asarray(np.exp(-k * r) / (FOUR_PI * r))[..., None, None]
    return KernelEval(matrix=prefactor * bracket, displacement=displacement, kappa=k)


def intermediate_matrix(point, displacement, basis=None):
    """The matrix ``A = a.alpha + a_4 alpha_4 + a_0 I`` with ``G = A e^{-kappa r}/(4 pi r^3)``.

    The coefficients are ``a = i(1 + kappa r) d``, ``a_4 = m r**2`` and ``a_0 = z r**2``.
    """
    basis = basis or dirac_basis('standard')
    d = np.asarray(displacement, dtype=float)
    r = float(np.linalg.norm(d))
    k = principal_kappa(point.z, point.m).item()
    a = 1j * (1 + k * r) * d
    return (
        np.einsum('k,kij->ij', a, basis.spatial)
        + point.m * r**2 * basis.mass
        + point.z * r**2 * np.eye(4)
    )


def traceless_part(point, displacement, basis=None):
    """``B = A* A - (|a|^2 + a_4^2 + |a_0|^2) I``, which has zero trace."""
    d = np.asarray(displacement, dtype=float)
    r = float(np.linalg.norm(d))
    k = principal_kappa(point.z, point.m).item()
    amat = intermediate_matrix(point, d, basis=basis)
    diagonal = (
        abs(1 + k * r) ** 2 * r**2 + (point.m * r**2) ** 2 + abs(point.z) ** 2 * r**4
    )
    return amat.conj().T @ amat - diagonal * np.eye(4)


def hs_closed_form(point, r):
    r"""Squared Hilbert-Schmidt norm of the kernel at distance ``r``.

    .. math::

        |G_z(x, x')|_{HS}^2 = \frac{4 e^{-2 \Re\kappa\, r}}{(4\pi)^2 r^4}
            \big(1 + 2\Re\kappa\, r + 2[(\Re\kappa)^2 + (\Re z)^2] r^2\big)

    The expression only involves ``Re kappa``, which vanishes on the spectrum of ``H_0``,
    so it is evaluated there as well (the continuous extension from either side of the cut).

    Parameters
    ----------
    point : :class:`SpectralPoint`
    r : float or array_like of float
        Distances, all strictly positive.

    Returns
    -------
    float or numpy.ndarray

    Examples
    --------
    >>> round(hs_closed_form(SpectralPoint(0, 0), 1.0) * 4 * np.pi**2, 12)
    1.0

    """
    r = _check_radii(r)
    rho = principal_kappa(point.z, point.m).real
    x = point.z.real
    polynomial = 1 + 2 * rho * r + 2 * (rho**2 + x**2) * r**2
    value = 4 * np.exp(-2 * rho * r) / (FOUR_PI**2 * r**4) * polynomial
    return _scalar_or_array(value)


def hs_bound(point, r):
    """Bound ``c1^2/r^4 + c2^2 (Re z)^2 e^{-2 Re kappa r}/r^2`` on :func:`hs_closed_form`."""
    r = _check_radii(r)
    rho = principal_kappa(point.z, point.m).real
    x = point.z.real
    value = C1**2 / r**4 + C2**2 * x**2 * np.exp(-2 * rho * r) / r**2
    return _scalar_or_array(value)


def hs_bound_uniform(point, r):
    """Scale-invariant bound ``(c1^2 + c2~^2 (Re z)^2/(Re kappa)^2) / r^4``.

    Obtained from :func:`hs_bound` with ``s e^{-s} <= 1/e``. It is infinite on the
    spectrum of ``H_0`` unless ``Re z = 0``.
    """
    r = _check_radii(r)
    rho = principal_kappa(point.z, point.m).real
    x = point.z.real
    if x == 0:
        ratio = 0.0
    elif rho == 0:
        ratio = np.inf
    else:
        ratio = (x / rho) ** 2
    return _scalar_or_array((C1**2 + C2_TILDE**2 * ratio) / r**4)
