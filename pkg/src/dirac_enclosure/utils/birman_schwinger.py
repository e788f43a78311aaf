"""Desk-scale discretization of the Birman-Schwinger operator.

For a scalar potential ``v = u |v|`` the operator
``K_z = |v|^(1/2) (H_0 - z)^(-1) u |v|^(1/2)`` is replaced by a dense Nystrom matrix on
a set of quadrature nodes. Block ``(i, j)`` of the matrix is

    sqrt(w_i |v_i|) G_z(x_i - x_j) u_j sqrt(w_j |v_j|)

for ``i != j`` and zero on the diagonal. The kernel is softened below the node spacing:
when ``|x_i - x_j|`` is less than ``rho_ij``, the mean of ``w_i^(1/3)`` and ``w_j^(1/3)``,
the kernel is evaluated at distance ``rho_ij`` in the same direction. Pairs further apart
see the exact kernel.

The largest singular value of the matrix is a consistency oracle for the analytic bounds
:func:`lemma1_bound` and :func:`lemma2_bound`. No error bound ties it to the norm of the
continuous operator; the zero diagonal makes it lean towards under-estimating.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

from dirac_enclosure.exceptions import (
    ConfigurationError,
    DomainError,
    UnsupportedPotentialError,
)
from dirac_enclosure.utils.constants import C_THM2, LEMMA_COEFF
from dirac_enclosure.utils.dirac import dirac_basis
from dirac_enclosure.utils.enclosure import f_function
from dirac_enclosure.utils.resolvent import SpectralPoint, kernel

LGR = logging.getLogger(__name__)

MAX_MATRIX_SIZE = 8192
"""Largest admissible matrix dimension ``4 N``."""

SCHEMES = ('monte_carlo', 'tensor_gauss')

_ROW_CHUNK = 64


@dataclass(frozen=True)
class TensorGauss:
    """Gauss-Legendre product rule with ``n`` nodes per axis on ``[-L, L]^3``."""

    n: int
    half_width: float = 3.0

    def __post_init__(self):
        if int(self.n) < 1:
            raise ConfigurationError(f'At least one node per axis is needed, got {self.n}.')
        if not float(self.half_width) > 0:
            raise ConfigurationError(f'The half-width must be positive, got {self.half_width}.')

    @property
    def node_count(self):
        return int(self.n) ** 3

    def sample(self, centre):
        abscissae, weights = np.polynomial.legendre.leggauss(int(self.n))
        abscissae = abscissae * self.half_width
        weights = weights * self.half_width
        grid = np.stack(np.meshgrid(abscissae, abscissae, abscissae, indexing='ij'), axis=-1)
        volume = np.einsum('i,j,k->ijk', weights, weights, weights)
        return grid.reshape(-1, 3) + centre, volume.ravel()

    def describe(self):
        return f'tensor_gauss(n={int(self.n)}, half_width={float(self.half_width):g})'


@dataclass(frozen=True)
class MonteCarlo:
    """Stratified Monte Carlo nodes on ``[-L, L]^3``, graded towards the centre.

    Each coordinate follows a normal distribution of standard deviation ``L/3``
    truncated to ``[-L, L]``. The cube of probabilities is cut into the finest
    ``k x k x k`` partition with at most ``n_nodes`` cells, so that every cell is
    occupied at every node count: each cell receives ``n_nodes // k**3`` uniform points
    and ``n_nodes % k**3`` cells, drawn without replacement, one more. A node's weight is
    its share of the cell's probability divided by the density at the node, which makes
    the weights an unbiased estimate of the box volume.
    """

    n_nodes: int
    seed: int = 0
    half_width: float = 3.0

    def __post_init__(self):
        if int(self.n_nodes) < 1:
            raise ConfigurationError(f'At least one node is needed, got {self.n_nodes}.')
        if not float(self.half_width) > 0:
            raise ConfigurationError(f'The half-width must be positive, got {self.half_width}.')

    @property
    def node_count(self):
        return int(self.n_nodes)

    @property
    def marginal(self):
        """The truncated normal distribution of each coordinate."""
        return stats.truncnorm(-3.0, 3.0, loc=0.0, scale=float(self.half_width) / 3)

    def sample(self, centre):
        n = int(self.n_nodes)
        side = 1
        while (side + 1) ** 3 <= n:
            side += 1
        rng = np.random.default_rng(self.seed)
        counts = np.full(side**3, n // side**3)
        counts[rng.choice(side**3, size=n % side**3, replace=False)] += 1
        cells = np.repeat(np.arange(side**3), counts)
        corner = np.stack(np.unravel_index(cells, (side,) * 3), axis=-1)
        unit = (corner + rng.uniform(size=(n, 3))) / side
        marginal = self.marginal
        nodes = marginal.ppf(unit)
        density = np.prod(marginal.pdf(nodes), axis=-1)
        weights = 1.0 / (side**3 * counts[cells] * density)
        return nodes + centre, weights

    def describe(self):
        return (
            f'monte_carlo(n={int(self.n_nodes)}, seed={self.seed}, '
            f'half_width={float(self.half_width):g})'
        )


@dataclass(frozen=True, eq=False)
class BSDiscretization:
    """A Nystrom matrix of the Birman-Schwinger operator and what it was built from.

    Off-diagonal block ``(i, j)`` holds ``sqrt(w_i |v_i|) G_z(d) u_j sqrt(w_j |v_j|)``.
    Here ``d = x_i - x_j`` when ``|x_i - x_j|`` is at least the softening radius
    ``(w_i^(1/3) + w_j^(1/3)) / 2``, and otherwise ``d`` is ``x_i - x_j`` stretched to
    that radius. Diagonal blocks are zero.
    """

    nodes: np.ndarray
    weights: np.ndarray
    point: SpectralPoint
    potential: object
    matrix: np.ndarray
    scheme: str = ''

    @property
    def node_count(self):
        return len(self.nodes)


@dataclass(frozen=True)
class BSNormEstimate:
    """Largest singular value of a :class:`BSDiscretization`."""

    value: float
    node_count: int
    estimator_iterations: int
    seed: int
    converged: bool = True


def scheme_from_config(name, nodes, seed=0, half_width=3.0):
    """Map the ``--scheme`` option onto a quadrature scheme.

    For ``tensor_gauss`` the number of nodes per axis is the integer cube root of
    ``nodes`` (rounded down, at least 1).
    """
    if name == 'monte_carlo':
        return MonteCarlo(int(nodes), seed=int(seed), half_width=half_width)
    if name == 'tensor_gauss':
        per_axis = max(int(round(int(nodes) ** (1 / 3))), 1)
        while per_axis**3 > int(nodes) and per_axis > 1:
            per_axis -= 1
        return TensorGauss(per_axis, half_width=half_width)
    raise ConfigurationError(f'Unknown scheme "{name}" (choose from {", ".join(SCHEMES)}).')


def _factors(potential, nodes, weights):
    values = np.asarray(potential.scalar_values(nodes), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise DomainError(
            f'{potential.label} is not finite at some quadrature nodes; '
            'move the nodes off the singularity (e.g. an even node count per axis).'
        )
    modulus = np.abs(values)
    left = np.sqrt(weights * modulus)
    phase = np.where(modulus > 0, values / np.where(modulus > 0, modulus, 1.0), 0.0)
    return left, phase * left


def _spacings(weights):
    return np.cbrt(weights)


def build_bs(point, potential, scheme, basis=None):
    """Assemble the Nystrom matrix of ``K_z`` for a scalar potential.

    Parameters
    ----------
    point : :class:`~dirac_enclosure.utils.resolvent.SpectralPoint`
        Must lie off the spectrum of ``H_0``.
    potential : :class:`~dirac_enclosure.utils.potential.PotentialModel`
        A scalar potential. The node box is centred at its singularity, if any.
    scheme : :class:`TensorGauss` or :class:`MonteCarlo`
    basis : :class:`~dirac_enclosure.utils.dirac.DiracBasis`, optional

    Returns
    -------
    :class:`BSDiscretization`

    Raises
    ------
    UnsupportedPotentialError
        For matrix-valued or declared potentials, and for ``z`` in the spectrum of ``H_0``.
    ConfigurationError
        If the matrix would exceed :data:`MAX_MATRIX_SIZE` rows.
    """
    if not potential.is_scalar:
        raise UnsupportedPotentialError(
            f'The Birman-Schwinger matrix is only built for scalar potentials, '
            f'not {potential.kind} ({potential.label or "unnamed"}).'
        )
    if not point.is_resolvent_point:
        raise UnsupportedPotentialError(
            f'z = {point.z} lies in the spectrum of the free operator with m = {point.m}; '
            'the Birman-Schwinger estimate is only defined off it.'
        )
    if 4 * scheme.node_count > MAX_MATRIX_SIZE:
        raise ConfigurationError(
            f'{scheme.node_count} nodes give a {4 * scheme.node_count}-dimensional matrix, '
            f'above the limit of {MAX_MATRIX_SIZE}.'
        )

    basis = basis or dirac_basis('standard')
    nodes, weights = scheme.sample(potential.centre)
    left, right = _factors(potential, nodes, weights)
    spacings = _spacings(weights)
    n = len(nodes)

    LGR.log(
        15, 'Assembling a %d x %d Birman-Schwinger matrix (%s).', 4 * n, 4 * n, scheme.describe()
    )
    matrix = np.zeros((4 * n, 4 * n), dtype=complex)
    for start in range(0, n, _ROW_CHUNK):
        rows = slice(start, min(start + _ROW_CHUNK, n))
        displacement = nodes[rows, None, :] - nodes[None, :, :]
        r = np.linalg.norm(displacement, axis=-1)
        diagonal = r == 0
        softening = 0.5 * (spacings[rows, None] + spacings[None, :])
        scale = np.where(diagonal, 1.0, np.maximum(r, softening) / np.where(diagonal, 1.0, r))
        displacement = np.where(diagonal[..., None], 1.0, displacement * scale[..., None])
        blocks = kernel(point, displacement, np.zeros(3), basis=basis).matrix
        blocks = left[rows, None, None, None] * blocks * right[None, :, None, None]
        blocks[diagonal] = 0
        height = blocks.shape[0]
        matrix[4 * start : 4 * (start + height)] = blocks.transpose(0, 2, 1, 3).reshape(
            4 * height, 4 * n
        )

    return BSDiscretization(
        nodes=nodes,
        weights=weights,
        point=point,
        potential=potential,
        matrix=matrix,
        scheme=scheme.describe(),
    )


def largest_singular_value(matrix, iterations=2000, seed=0, tol=1e-12):
    """Largest singular value by power iteration on ``M* M``.

    The start vector is complex Gaussian from :func:`numpy.random.default_rng`. The
    iteration stops once the estimate changes by at most ``tol`` relative; if
    ``iterations`` are used up first a warning is logged. The estimate never exceeds the
    true value.

    Returns
    -------
    value : float
    iterations : int
        Number of iterations performed.
    converged : bool
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2:
        raise ValueError(f'Expected a matrix, got shape {matrix.shape}.')
    if matrix.size == 0 or not np.any(matrix):
        return 0.0, 0, True

    adjoint = matrix.conj().T
    rng = np.random.default_rng(seed)
    vector = rng.standard_normal(matrix.shape[1]) + 1j * rng.standard_normal(matrix.shape[1])
    vector /= np.linalg.norm(vector)

    estimate = previous = 0.0
    for step in range(1, int(iterations) + 1):
        image = matrix @ vector
        previous, estimate = estimate, float(np.linalg.norm(image))
        if estimate == 0:
            # start vector in the kernel of M
            vector = rng.standard_normal(matrix.shape[1]) + 0j
            vector /= np.linalg.norm(vector)
            continue
        vector = adjoint @ image
        vector /= np.linalg.norm(vector)
        if abs(estimate - previous) <= tol * estimate:
            return estimate, step, True

    LGR.warning(
        'Power iteration stopped after %d iterations (last relative change %.2g).',
        iterations,
        abs(estimate - previous) / estimate if estimate else 0.0,
    )
    return estimate, int(iterations), False


def bs_norm_estimate(disc, iterations=2000, seed=0, tol=1e-8):
    """Estimate the norm of the discretized operator.

    Power iteration stops at a relative change of ``tol`` or after ``iterations`` steps.

    >>> disc = BSDiscretization(
    ...     nodes=np.zeros((1, 3)), weights=np.ones(1), point=SpectralPoint(1j, 0),
    ...     potential=None, matrix=np.diag([0.5, 2.0, 1.0, 0.0]).astype(complex))
    >>> round(bs_norm_estimate(disc).value, 6)
    2.0

    """
    value, used, converged = largest_singular_value(disc.matrix, iterations, seed, tol=tol)
    LGR.info(
        'Birman-Schwinger norm estimate %.6g on %d nodes (%d iterations).',
        value,
        disc.node_count,
        used,
    )
    return BSNormEstimate(
        value=value,
        node_count=disc.node_count,
        estimator_iterations=used,
        seed=int(seed),
        converged=converged,
    )


def lemma1_bound(point, norm3):
    """Analytic bound ``c (1 + (Re z)^2/(Re kappa)^2)^(1/2) ||V||_3`` on ``||K_z||``.

    ``c = (pi/2)^(1/3) (1 + e^-1 + e^-2)^(1/2)``. The bound is 0 for a vanishing norm
    and infinite on the spectrum of ``H_0`` away from ``Re z = 0``.

    >>> round(lemma1_bound(SpectralPoint(2j, 1), 1.0), 5)
    1.42523

    """
    norm3 = float(norm3)
    if norm3 == 0:
        return 0.0
    return float(LEMMA_COEFF * f_function(point.z, point.m) * norm3)


def lemma2_bound(point, norm3, norm32):
    """Mass-independent bound ``c ||V||_3 + C' |Re z| ||V||_{3/2}`` on ``||K_z||``."""
    x = abs(point.z.real)
    second = 0.0 if x == 0 else C_THM2 * x * float(norm32)
    return float(LEMMA_COEFF * float(norm3) + second)
