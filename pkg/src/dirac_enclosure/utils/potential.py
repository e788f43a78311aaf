"""Matrix-valued potentials, their pointwise norm and their Lebesgue norms.

A :class:`PotentialModel` wraps a vectorized function together with the structural
information the quadrature needs (radial symmetry, location of a singularity, compact
support). Lebesgue norms ``|| |V| ||_p`` for ``p`` in ``{3, 3/2}`` are computed with
:func:`scipy.integrate.quad` in the radial variable around the singularity (or the
origin), with an adaptive product rule over the sphere for non-radial potentials.

The radial integral is split into three parts:

* an *inner* part near the centre, refined over ``eps_k = r0 * 10**(-2**k)`` in the
  logarithmic variable ``t = ln r``; three consecutive refinements that each grow the
  partial integral by a factor of at least 1.5 are reported as a divergence,
* a *core* part ``[r0/10, r0]``, and
* *outer* shells ``[r0 2^k, r0 2^(k+1)]``, added until one contributes less than a tenth
  of the requested tolerance. This truncation is a heuristic for slowly decaying tails.

``r0`` is the support radius when one is declared and 1 otherwise.
"""

import logging
import warnings
from dataclasses import dataclass, replace
from functools import cache

import numpy as np
from scipy import integrate

from dirac_enclosure.exceptions import (
    ConfigurationError,
    DomainError,
    UnsupportedPotentialError,
)
from dirac_enclosure.utils.constants import KATO_CONSTANT, RELATIVE_BOUND
from dirac_enclosure.utils.dirac import operator_norm

LGR = logging.getLogger(__name__)

KINDS = ('scalar_radial', 'scalar_general', 'matrix_general', 'declared')
SCALAR_KINDS = ('scalar_radial', 'scalar_general')
EXPONENTS = (3.0, 1.5)

_MIN_INNER = 4
_MAX_INNER = 8
_MIN_SHELLS = 3
_MAX_SHELLS = 48
_GROWTH_FACTOR = 1.5
_GROWTH_STREAK = 3
_ANGULAR_LEVELS = (8, 16, 32, 64, 128)
_QUAD_LIMIT = 200


@dataclass(frozen=True, eq=False)
class PotentialModel:
    """A potential ``V`` on three-dimensional space.

    Attributes
    ----------
    kind : str
        One of :data:`KINDS`. ``scalar_radial`` functions take radii ``r`` of any shape,
        ``scalar_general`` functions take points of shape (..., 3) and return (...),
        ``matrix_general`` functions take points of shape (..., 3) and return (..., 4, 4).
        ``declared`` potentials carry norms only.
    function : callable or None
        The vectorized profile or field.
    declared_norm3, declared_norm32 : float, optional
        Norms known in advance; they take precedence over quadrature.
    singularity : tuple of float, optional
        A point where ``V`` is not defined; quadrature is centred there.
    support_radius : float, optional
        ``V`` vanishes outside the ball of this radius around the centre.
    label : str
        Human-readable description echoed in reports.
    """

    kind: str
    function: object = None
    declared_norm3: float | None = None
    declared_norm32: float | None = None
    singularity: tuple | None = None
    support_radius: float | None = None
    label: str = ''

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(
                f'Unknown potential kind "{self.kind}" (choose from {", ".join(KINDS)}).'
            )
        if self.kind == 'declared':
            if self.declared_norm3 is None:
                raise ConfigurationError('A declared potential needs at least its L3 norm.')
        elif not callable(self.function):
            raise ConfigurationError(f'A {self.kind} potential needs a callable function.')
        for name in ('declared_norm3', 'declared_norm32'):
            value = getattr(self, name)
            if value is not None and not float(value) >= 0:
                raise ConfigurationError(f'{name} must be nonnegative, got {value}.')
        if self.support_radius is not None and not float(self.support_radius) > 0:
            raise ConfigurationError(
                f'support_radius must be positive, got {self.support_radius}.'
            )
        if self.singularity is not None:
            object.__setattr__(
                self, 'singularity', tuple(float(c) for c in np.ravel(self.singularity))
            )

    @property
    def is_scalar(self):
        """Whether ``V`` is a scalar multiple of the identity."""
        return self.kind in SCALAR_KINDS

    @property
    def centre(self):
        """Centre used for radial quadrature."""
        return np.array(self.singularity if self.singularity is not None else (0.0, 0.0, 0.0))

    def scalar_values(self, points):
        """The scalar ``v(x)`` at points of shape (..., 3) (scalar kinds only)."""
        if not self.is_scalar:
            raise UnsupportedPotentialError(
                f'{self.kind} potentials have no scalar values ({self.label or "unnamed"}).'
            )
        points = np.asarray(points, dtype=float)
        if self.kind == 'scalar_radial':
            radii = np.linalg.norm(points - self.centre, axis=-1)
            return np.asarray(self.function(radii))
        return np.asarray(self.function(points))

    def modulus(self, points):
        """``|V(x)|`` at points of shape (..., 3), without the singularity check."""
        if self.kind == 'declared':
            raise UnsupportedPotentialError(
                'A declared-norm potential has no pointwise values to evaluate.'
            )
        if self.is_scalar:
            return np.abs(self.scalar_values(points))
        values = np.asarray(self.function(np.asarray(points, dtype=float)), dtype=complex)
        return np.asarray(operator_norm(values))


def radial_potential(profile, singular=False, support_radius=None, label='', **norms):
    """Scalar potential ``v(|x|) I`` from a vectorized radial profile."""
    return PotentialModel(
        kind='scalar_radial',
        function=profile,
        singularity=(0.0, 0.0, 0.0) if singular else None,
        support_radius=support_radius,
        label=label or 'radial',
        **norms,
    )


def scalar_potential(func, singularity=None, support_radius=None, label='', **norms):
    """Scalar potential ``v(x) I`` from a vectorized function of points (..., 3)."""
    return PotentialModel(
        kind='scalar_general',
        function=func,
        singularity=singularity,
        support_radius=support_radius,
        label=label or 'scalar',
        **norms,
    )


def matrix_potential(func, singularity=None, support_radius=None, label='', **norms):
    """General potential from a vectorized function returning (..., 4, 4) matrices."""
    return PotentialModel(
        kind='matrix_general',
        function=func,
        singularity=singularity,
        support_radius=support_radius,
        label=label or 'matrix',
        **norms,
    )


def declared(norm3, norm32=None):
    """A potential known only through its norms."""
    label = f'declared(norm3={norm3:g}' + (')' if norm32 is None else f', norm32={norm32:g})')
    return PotentialModel(
        kind='declared',
        declared_norm3=float(norm3),
        declared_norm32=None if norm32 is None else float(norm32),
        label=label,
    )


def gaussian(v0=1.0, width=1.0):
    """``v0 exp(-|x|^2 / width^2) I``.

    Its norms are ``|v0| width (pi/3)^(1/2)`` in ``L^3`` and ``|v0| width^2 (2 pi/3)`` in
    ``L^{3/2}``.
    """
    v0, width = float(v0), float(width)
    if not width > 0:
        raise ConfigurationError(f'The Gaussian width must be positive, got {width}.')

    def profile(r):
        return v0 * np.exp(-((np.asarray(r) / width) ** 2))

    return radial_potential(profile, label=f'gaussian(v0={v0:g}, width={width:g})')


def cutoff_coulomb(Z=1.0, R=1.0):
    """``-Z/|x| I`` inside the ball of radius ``R``, zero outside."""
    Z, R = float(Z), float(R)
    if not R > 0:
        raise ConfigurationError(f'The cutoff radius must be positive, got {R}.')

    def profile(r):
        r = np.asarray(r, dtype=float)
        inside = (r < R) & (r > 0)
        return np.where(inside, -Z / np.where(inside, r, 1.0), 0.0)

    return radial_potential(
        profile, singular=True, support_radius=R, label=f'cutoff_coulomb(Z={Z:g}, R={R:g})'
    )


def bump(v0=1.0, R=1.0):
    """Smooth compactly supported ``v0 exp(1 - 1/(1 - |x|^2/R^2)) I`` (equal to ``v0`` at 0)."""
    v0, R = float(v0), float(R)
    if not R > 0:
        raise ConfigurationError(f'The bump radius must be positive, got {R}.')

    def profile(r):
        s = (np.asarray(r, dtype=float) / R) ** 2
        inside = s < 1
        with np.errstate(divide='ignore', over='ignore'):
            return np.where(inside, v0 * np.exp(1 - 1 / np.where(inside, 1 - s, 1.0)), 0.0)

    return radial_potential(profile, support_radius=R, label=f'bump(v0={v0:g}, R={R:g})')


CONSTRUCTORS = {
    'gaussian': (gaussian, ('v0', 'width')),
    'cutoff_coulomb': (cutoff_coulomb, ('Z', 'R')),
    'bump': (bump, ('v0', 'R')),
    'declared': (declared, ('norm3', 'norm32')),
}


def from_spec(spec):
    """Build a potential from ``'NAME'`` or ``'NAME:params'``.

    Parameters are comma-separated, either positional or ``key=value``.

    >>> from_spec('gaussian:v0=0.1,width=2').label
    'gaussian(v0=0.1, width=2)'
    >>> from_spec('bump:0.5,1').label
    'bump(v0=0.5, R=1)'

    """
    name, _, params = str(spec).partition(':')
    name = name.strip().lower()
    if name not in CONSTRUCTORS:
        raise ConfigurationError(
            f'Unknown potential "{name}" (choose from {", ".join(CONSTRUCTORS)}).'
        )
    constructor, names = CONSTRUCTORS[name]
    args, kwargs = [], {}
    for item in filter(None, (p.strip() for p in params.split(','))):
        key, sep, value = item.partition('=')
        try:
            if sep:
                if key.strip() not in names:
                    raise ConfigurationError(
                        f'Unknown parameter "{key.strip()}" for {name} '
                        f'(expected {", ".join(names)}).'
                    )
                kwargs[key.strip()] = float(value)
            else:
                args.append(float(key))
        except ValueError as e:
            raise ConfigurationError(f'Invalid parameter "{item}" for {name}: {e}') from e
    if len(args) > len(names):
        raise ConfigurationError(f'{name} takes at most {len(names)} parameters.')
    try:
        return constructor(*args, **kwargs)
    except TypeError as e:
        raise ConfigurationError(f'Invalid parameters for {name}: {e}') from e


def scaled(potential, factor):
    """The potential ``c V``; declared norms scale with ``|c|``."""
    factor = complex(factor) if np.iscomplexobj(factor) else float(factor)
    func = potential.function

    def _scaled(arg):
        return factor * np.asarray(func(arg))

    norms = {
        name: None if getattr(potential, name) is None else abs(factor) * getattr(potential, name)
        for name in ('declared_norm3', 'declared_norm32')
    }
    return replace(
        potential,
        function=None if func is None else _scaled,
        label=f'{factor:g}*{potential.label}',
        **norms,
    )


def add(first, second):
    """Sum of two scalar potentials sharing their centre.

    The result is radial when both terms are; declared norms are dropped.
    """
    if not (first.is_scalar and second.is_scalar):
        raise UnsupportedPotentialError('Only scalar potentials can be added.')
    if first.singularity != second.singularity:
        raise UnsupportedPotentialError('Summands must share their singular point.')
    support = None
    if first.support_radius is not None and second.support_radius is not None:
        support = max(first.support_radius, second.support_radius)
    label = f'{first.label} + {second.label}'
    if first.kind == second.kind == 'scalar_radial':
        f1, f2 = first.function, second.function
        return replace(
            first,
            function=lambda r: np.asarray(f1(r)) + np.asarray(f2(r)),
            declared_norm3=None,
            declared_norm32=None,
            support_radius=support,
            label=label,
        )
    return PotentialModel(
        kind='scalar_general',
        function=lambda x: first.scalar_values(x) + second.scalar_values(x),
        singularity=first.singularity,
        support_radius=support,
        label=label,
    )


def adjoint(potential):
    """The pointwise adjoint ``V(x)*``; its modulus, norms and verdicts equal those of ``V``."""
    if potential.kind == 'declared':
        return replace(potential, label=f'adjoint({potential.label})')
    func = potential.function
    if potential.is_scalar:

        def _adjoint(arg):
            return np.conj(np.asarray(func(arg)))

    else:

        def _adjoint(arg):
            return np.conj(np.swapaxes(np.asarray(func(arg)), -1, -2))

    return replace(potential, function=_adjoint, label=f'adjoint({potential.label})')


def _check_singularity(potential, points):
    if potential.singularity is None:
        return
    hits = np.all(np.asarray(points, dtype=float) == potential.centre, axis=-1)
    if np.any(hits):
        raise DomainError(
            f'{potential.label} is singular at {potential.singularity}; '
            'its norm cannot be evaluated there.'
        )


def pointwise_norm(potential, x):
    """Operator norm ``|V(x)|`` of the matrix ``V(x)`` at a single point.

    For scalar kinds this is the modulus ``|v(x)|``.

    >>> pointwise_norm(gaussian(0.3), (0.0, 0.0, 0.0))
    0.3

    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError(f'Expected a single 3-vector, got shape {x.shape}.')
    _check_singularity(potential, x)
    return float(potential.modulus(x))


def pointwise_norms(potential, points):
    """Vectorized :func:`pointwise_norm` over points of shape (..., 3)."""
    points = np.asarray(points, dtype=float)
    _check_singularity(potential, points)
    return potential.modulus(points)


@dataclass(frozen=True)
class QuadratureResult:
    """A Lebesgue norm together with its accuracy."""

    value: float
    estimated_relative_error: float
    converged: bool
    provenance: str = 'quadrature'


@dataclass(frozen=True)
class NormSet:
    """Both norms of a potential, with provenance."""

    norm3: QuadratureResult
    norm32: QuadratureResult | None = None

    @property
    def provenance(self):
        """``{'norm3': ..., 'norm32': ...}`` as ``'declared'`` or ``'quadrature'``."""
        out = {'norm3': self.norm3.provenance}
        if self.norm32 is not None:
            out['norm32'] = self.norm32.provenance
        return out


def _quad(func, low, high, epsrel):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        result = integrate.quad(
            func, low, high, epsabs=0.0, epsrel=epsrel, limit=_QUAD_LIMIT, full_output=1
        )
    # a fourth element (the message) is only returned when quad flags a problem
    return result[0], result[1], len(result) == 3


@cache
def _sphere_rule(n):
    """Gauss-Legendre in ``cos(theta)`` times a midpoint rule with ``2n`` nodes in ``phi``."""
    cos_theta, weights = np.polynomial.legendre.leggauss(n)
    phi = 2 * np.pi * (np.arange(2 * n) + 0.5) / (2 * n)
    sin_theta = np.sqrt(1 - cos_theta**2)
    directions = np.stack(
        [
            np.outer(sin_theta, np.cos(phi)),
            np.outer(sin_theta, np.sin(phi)),
            np.outer(cos_theta, np.ones_like(phi)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    weights = np.outer(weights, np.full(2 * n, np.pi / n)).ravel()
    directions.setflags(write=False)
    weights.setflags(write=False)
    return directions, weights


class _SphericalMean:
    """``r -> sum over the sphere of |V(c + r w)|^p``, with adaptive angular resolution."""

    def __init__(self, potential, p, epsrel):
        self.potential = potential
        self.p = p
        self.epsrel = epsrel
        self.centre = potential.centre
        self.resolved = True

    def __call__(self, r):
        previous = None
        for n in _ANGULAR_LEVELS:
            directions, weights = _sphere_rule(n)
            values = self.potential.modulus(self.centre + r * directions) ** self.p
            current = float(weights @ values)
            if previous is not None and abs(current - previous) <= self.epsrel * abs(current):
                return current
            previous = current
        self.resolved = False
        return current


def _density(potential, p, epsrel):
    if potential.kind == 'scalar_radial':
        profile = potential.function
        return lambda r: 4 * np.pi * float(np.abs(profile(r))) ** p, None
    spherical = _SphericalMean(potential, p, epsrel)
    return spherical, spherical


def _radial_integral(density, r0, bounded, epsrel):
    """Integrate ``r^2 density(r)`` over ``(0, inf)``.

    Returns ``(value, absolute_error, converged)``; ``value`` is ``inf`` for a detected
    divergence.
    """

    def integrand(r):
        return r * r * density(r)

    def log_integrand(t):
        r = np.exp(t)
        return r**3 * density(r)

    total, error, converged = _quad(integrand, r0 / 10, r0, epsrel)

    streak = 0
    for k in range(_MAX_INNER):
        high, low = r0 * 10.0 ** (-(2**k)), r0 * 10.0 ** (-(2 ** (k + 1)))
        increment, inc_error, ok = _quad(log_integrand, np.log(low), np.log(high), epsrel)
        previous, total = total, total + increment
        error += inc_error
        converged &= ok
        streak = streak + 1 if previous > 0 and total >= _GROWTH_FACTOR * previous else 0
        if streak >= _GROWTH_STREAK:
            LGR.warning(
                'Partial integrals grew by a factor >= %.1f in %d consecutive refinements '
                'towards the centre: the norm diverges.',
                _GROWTH_FACTOR,
                _GROWTH_STREAK,
            )
            return np.inf, np.inf, False
        if k + 1 >= _MIN_INNER and increment <= epsrel * total:
            error += increment
            break
    else:
        LGR.warning('Refinement towards the centre did not stabilize.')
        converged = False

    if bounded:
        return total, error, converged

    shells = []
    low = r0
    for k in range(_MAX_SHELLS):
        increment, inc_error, ok = _quad(integrand, low, 2 * low, epsrel)
        shells.append(increment)
        total += increment
        error += inc_error
        converged &= ok
        if k + 1 >= _MIN_SHELLS and increment <= epsrel * total:
            error += increment
            break
        low *= 2
    else:
        converged = False
        if shells[-1] >= shells[-2]:
            LGR.warning('Shell contributions stopped decaying at radius %g: divergence.', low)
            return np.inf, np.inf, False
        LGR.warning('Tail truncation did not stabilize within %d shells.', _MAX_SHELLS)
        error += shells[-1]

    return total, error, converged


def _check_tolerance(tol):
    tol = float(tol)
    if not 0 < tol <= 0.1:
        raise ConfigurationError(f'The quadrature tolerance must lie in (0, 0.1], got {tol}.')
    return tol


def _check_exponent(p):
    p = float(p)
    if p not in EXPONENTS:
        raise ConfigurationError(f'Only the exponents 3 and 3/2 are supported, got {p}.')
    return p


def lp_norm(potential, p, tol=1e-6):
    """``L^p`` norm of ``|V|`` for ``p`` in ``{3, 3/2}``.

    Declared norms are returned as they are, with provenance ``'declared'``.

    Parameters
    ----------
    potential : :class:`PotentialModel`
    p : float
        3 or 1.5.
    tol : float
        Requested relative accuracy in ``(0, 0.1]``.

    Returns
    -------
    :class:`QuadratureResult`
        ``value`` is ``inf`` (and ``converged`` False) when a divergence is detected.
    """
    p = _check_exponent(p)
    tol = _check_tolerance(tol)
    declared_value = potential.declared_norm3 if p == 3 else potential.declared_norm32
    if declared_value is not None:
        return QuadratureResult(float(declared_value), 0.0, True, 'declared')
    if potential.kind == 'declared':
        raise UnsupportedPotentialError(
            f'No L{p:g} norm declared for {potential.label} and no function to integrate.'
        )

    epsrel = tol / 10
    density, spherical = _density(potential, p, epsrel)
    bounded = potential.support_radius is not None
    r0 = float(potential.support_radius) if bounded else 1.0
    integral, error, converged = _radial_integral(density, r0, bounded, epsrel)
    if spherical is not None and not spherical.resolved:
        LGR.warning('Angular resolution limit reached for %s.', potential.label)
        converged = False

    if not np.isfinite(integral):
        return QuadratureResult(np.inf, np.inf, False)
    if integral <= 0:
        return QuadratureResult(0.0, 0.0, converged)

    value = integral ** (1 / p)
    relative_error = error / integral / p
    converged = bool(converged and relative_error <= tol)
    if not converged:
        LGR.warning(
            'L%g norm of %s did not converge (estimate %g, relative error %.2g).',
            p,
            potential.label,
            value,
            relative_error,
        )
    return QuadratureResult(float(value), float(relative_error), converged)


def resolve_norms(potential, tol=1e-6, need_norm32=True):
    """Collect the norms used by the criteria, declared ones first."""
    norm3 = lp_norm(potential, 3, tol)
    norm32 = None
    if need_norm32 and (potential.kind != 'declared' or potential.declared_norm32 is not None):
        norm32 = lp_norm(potential, 1.5, tol)
    for name, result in (('L3', norm3), ('L3/2', norm32)):
        if result is not None:
            LGR.info(
                '%s norm of %s: %.12g (%s).',
                name,
                potential.label,
                result.value,
                result.provenance,
            )
    return NormSet(norm3=norm3, norm32=norm32)


def check_proposition_sufficient(v1_norm3):
    """Sufficient condition ``||v1||_3 < (2 pi^2)^(1/3)`` for the form bound.

    ``v1`` is the ``L^3`` part of a split ``|V| <= v1 + v2`` with bounded ``v2``.

    >>> check_proposition_sufficient(2.7)
    True
    >>> check_proposition_sufficient(2.71)
    False

    """
    v1_norm3 = float(v1_norm3)
    if not v1_norm3 >= 0:
        raise ConfigurationError(f'The L3 norm must be nonnegative, got {v1_norm3}.')
    return v1_norm3 < RELATIVE_BOUND


def check_kato_pointwise(potential, a, b, samples=10000, seed=0):
    """Spot-check ``|V(x)| <= a (2/pi)/|x| + b`` on random points.

    Directions are uniform on the sphere and radii log-uniform on ``[1e-6, 1e6]``. This can
    only falsify the bound; ``True`` means no violation was found.

    Parameters
    ----------
    potential : :class:`PotentialModel`
    a : float
        Relative bound, in ``(0, 1)``.
    b : float
        Absolute bound.
    samples : int
        Number of random points.
    seed : int
        Seed of :func:`numpy.random.default_rng`.
    """
    a, b = float(a), float(b)
    if not 0 < a < 1:
        raise ConfigurationError(f'The relative bound a must lie in (0, 1), got {a}.')
    if int(samples) < 1:
        raise ConfigurationError(f'At least one sample is needed, got {samples}.')

    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((int(samples), 3))
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    radii = 10.0 ** rng.uniform(-6, 6, int(samples))
    points = radii[:, None] * directions

    values = potential.modulus(points)
    violations = values > a * KATO_CONSTANT / radii + b
    if np.any(violations):
        LGR.info(
            'Pointwise bound violated at %d of %d samples.', int(violations.sum()), int(samples)
        )
    return not bool(np.any(violations))
