"""Dirac matrices and the two matrix norms used by the resolvent estimates.

Matrices are plain :class:`numpy.ndarray` objects of shape ``(4, 4)`` and complex dtype.
The norm functions also accept stacks of shape ``(..., 4, 4)`` and then return an array
of norms with the leading shape.
"""

import logging
from dataclasses import dataclass
from functools import cache

import numpy as np

from dirac_enclosure.exceptions import ConfigurationError

LGR = logging.getLogger(__name__)

REPRESENTATIONS = ('standard', 'weyl')

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
_I2 = np.eye(2, dtype=complex)
_O2 = np.zeros((2, 2), dtype=complex)

# Power iteration on (M*M)^(2^k)
_MAX_SQUARINGS = 64
_RAYLEIGH_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class DiracBasis:
    """The four Hermitian Dirac matrices in a given representation.

    Attributes
    ----------
    alpha : numpy.ndarray of shape (4, 4, 4)
        Read-only stack ``(alpha_1, alpha_2, alpha_3, alpha_4)``; ``alpha_4`` is the
        mass matrix (often written beta).
    representation : str
        Name of the representation, one of :data:`REPRESENTATIONS`.
    """

    alpha: np.ndarray
    representation: str

    @property
    def spatial(self):
        """The three matrices coupling to the momentum, shape (3, 4, 4)."""
        return self.alpha[:3]

    @property
    def mass(self):
        """The mass matrix ``alpha_4``."""
        return self.alpha[3]

    def dot(self, vectors):
        """Contract ``alpha_1..3`` with 3-vectors of shape (..., 3)."""
        return np.einsum('...k,kij->...ij', np.asarray(vectors, dtype=float), self.spatial)


@cache
def dirac_basis(representation='standard'):
    """Build the Dirac matrices in the requested representation.

    ``'standard'`` is the Dirac-Pauli representation, with
    ``alpha_k = [[0, s_k], [s_k, 0]]`` and ``alpha_4 = diag(1, 1, -1, -1)``;
    ``'weyl'`` is the chiral one, with ``alpha_k = diag(-s_k, s_k)`` and
    ``alpha_4 = [[0, I], [I, 0]]``.

    >>> basis = dirac_basis('standard')
    >>> np.diag(basis.mass).real.tolist()
    [1.0, 1.0, -1.0, -1.0]
    >>> anticommutation_residual(dirac_basis('weyl'))
    0.0

    """
    if representation == 'standard':
        spatial = [np.block([[_O2, s], [s, _O2]]) for s in _PAULI]
        mass = np.block([[_I2, _O2], [_O2, -_I2]])
    elif representation == 'weyl':
        spatial = [np.block([[-s, _O2], [_O2, s]]) for s in _PAULI]
        mass = np.block([[_O2, _I2], [_I2, _O2]])
    else:
        raise ConfigurationError(
            f'Unknown Dirac representation "{representation}" '
            f'(choose from {", ".join(REPRESENTATIONS)}).'
        )

    alpha = np.stack(spatial + [mass])
    alpha.setflags(write=False)
    return DiracBasis(alpha=alpha, representation=representation)


def anticommutation_residual(basis):
    """Largest entry modulus of ``a_mu a_nu + a_nu a_mu - 2 delta_mu_nu I`` over all pairs."""
    alpha = basis.alpha
    anti = np.einsum('mij,njk->mnik', alpha, alpha)
    anti = anti + anti.transpose(1, 0, 2, 3)
    expected = 2 * np.einsum('mn,ik->mnik', np.eye(4), np.eye(4))
    return float(np.max(np.abs(anti - expected)))


def trace_residual(basis):
    """Largest modulus among ``tr(alpha_mu)`` and ``tr(alpha_4 alpha_k)``."""
    traces = np.trace(basis.alpha, axis1=-2, axis2=-1)
    mixed = np.trace(basis.mass @ basis.spatial, axis1=-2, axis2=-1)
    return float(max(np.max(np.abs(traces)), np.max(np.abs(mixed))))


def hermiticity_residual(basis):
    """Largest entry modulus of ``alpha_mu - alpha_mu^*``."""
    return float(np.max(np.abs(basis.alpha - basis.alpha.conj().transpose(0, 2, 1))))


def _as_matrices(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim < 2 or matrix.shape[-2:] != (4, 4):
        raise ValueError(f'Expected a 4x4 matrix or a stack of them, got shape {matrix.shape}.')
    return matrix


def _scalar_or_array(values, ndim):
    return float(values) if ndim == 2 else values


def hs_norm(matrix):
    """Hilbert-Schmidt (Frobenius) norm ``sqrt(tr(M* M))``.

    Parameters
    ----------
    matrix : array_like of shape (4, 4) or (..., 4, 4)

    Returns
    -------
    float or numpy.ndarray

    Examples
    --------
    >>> hs_norm(np.eye(4))
    2.0

    """
    matrix = _as_matrices(matrix)
    squares = np.einsum('...ij,...ij->...', matrix.conj(), matrix).real
    return _scalar_or_array(np.sqrt(squares), matrix.ndim)


def operator_norm(matrix):
    """Largest singular value of a 4x4 complex matrix.

    Power iteration on ``G = M* M`` driven by repeated squaring. Each step replaces
    ``P`` by ``P @ P`` (rescaled by its largest entry), takes the column of ``P`` with
    the largest norm as the iterate, and evaluates the Rayleigh quotient of ``G`` on it.
    The loop stops when the quotient changes by less than 1e-14 relative. The start is
    ``P = G`` itself, so the result does not depend on any random state.

    Parameters
    ----------
    matrix : array_like of shape (4, 4) or (..., 4, 4)

    Returns
    -------
    float or numpy.ndarray
        The operator norm(s); 0 for the zero matrix.
    """
    matrix = _as_matrices(matrix)
    stack = matrix.reshape((-1, 4, 4))

    gram = np.conj(np.swapaxes(stack, -1, -2)) @ stack
    scale = np.max(np.abs(gram), axis=(-2, -1))
    nonzero = scale > 0
    result = np.zeros(stack.shape[0])
    if not np.any(nonzero):
        return _scalar_or_array(result.reshape(matrix.shape[:-2]), matrix.ndim)

    gram = gram[nonzero] / scale[nonzero, None, None]
    power = gram.copy()
    previous = np.full(gram.shape[0], np.inf)
    quotient = previous
    for _ in range(_MAX_SQUARINGS):
        column_norms = np.linalg.norm(power, axis=-2)
        best = np.argmax(column_norms, axis=-1)
        vector = np.take_along_axis(power, best[:, None, None], axis=-1)[..., 0]
        vector = vector / np.linalg.norm(vector, axis=-1, keepdims=True)
        quotient = np.einsum('ni,nij,nj->n', vector.conj(), gram, vector).real
        if np.all(np.abs(quotient - previous) <= _RAYLEIGH_RTOL * np.abs(quotient)):
            break
        previous = quotient
        power = power @ power
        power = power / np.max(np.abs(power), axis=(-2, -1))[:, None, None]
    else:
        LGR.debug('Operator norm iteration used all %d squarings.', _MAX_SQUARINGS)

    result[nonzero] = np.sqrt(np.clip(quotient, 0, None) * scale[nonzero])
    return _scalar_or_array(result.reshape(matrix.shape[:-2]), matrix.ndim)
