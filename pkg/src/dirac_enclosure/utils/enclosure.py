r"""Eigenvalue exclusion criteria and their evaluation over regions of the complex plane.

Two sufficient conditions guarantee that ``lambda`` is not an eigenvalue of
``H_V = H_0 + V``:

* the *L3 criterion* ``C f(lambda, m) || |V| ||_3 < 1``, and
* the *mass-independent criterion* ``C || |V| ||_3 + C' |Re lambda| || |V| ||_{3/2} < 1``,

with

.. math::

    f(\lambda, m) = \sqrt{1 + \frac{(\Re\lambda)^2}{(\Re\sqrt{m^2 - \lambda^2})^2}}.

A point is certified when at least one of the two conditions holds. Both comparisons are
strict and no tolerance band is applied.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from dirac_enclosure.exceptions import ConfigurationError
from dirac_enclosure.utils.constants import C_THM1, C_THM2
from dirac_enclosure.utils.resolvent import principal_kappa

LGR = logging.getLogger(__name__)

REASON_ESSENTIAL_SPECTRUM = 'f infinite on essential spectrum'

GRID_COLUMNS = ('re', 'im', 'f', 'thm1_lhs', 'thm2_lhs', 'certified')


def constant_C():
    """Recompute ``C = (pi/2)^(1/3) sqrt(1 + e^-1 + 2 e^-2)``.

    >>> round(constant_C(), 5)
    1.488

    """
    return float(np.cbrt(np.pi / 2) * np.sqrt(1 + np.exp(-1) + 2 * np.exp(-2)))


def constant_Cprime():
    """Recompute ``C' = 2^(17/6) / (3 pi^(2/3))``.

    >>> round(constant_Cprime(), 5)
    1.10755

    """
    return float(2 ** (17 / 6) / (3 * np.pi ** (2 / 3)))


def _scalar_or_array(values):
    values = np.asarray(values)
    return values.item() if values.ndim == 0 else values


def _check_norm(value, name):
    value = np.asarray(value, dtype=float)
    if np.any(np.isnan(value)) or np.any(value < 0):
        raise ConfigurationError(f'The norm {name} must be nonnegative, got {value}.')
    return value


def f_function(lam, m):
    """Spectral weight ``f(lambda, m)`` of the L3 criterion.

    Equals 1 whenever ``Re lambda = 0`` (including ``lambda = 0, m = 0``), and ``+inf``
    when ``Re sqrt(m^2 - lambda^2) = 0`` otherwise, i.e. on ``(-inf, -m] U [m, inf)``.
    Accepts arrays and evaluates them elementwise.

    Parameters
    ----------
    lam : complex or array_like of complex
    m : float or array_like of float

    Returns
    -------
    float or numpy.ndarray

    Examples
    --------
    >>> f_function(2j, 1)
    1.0
    >>> f_function(1.0, 1)
    inf
    >>> round(f_function(3 + 4j, 0), 12)
    1.25

    """
    lam = np.asarray(lam, dtype=complex)
    rho = principal_kappa(lam, m).real
    x = lam.real
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        ratio = np.where(rho > 0, x / np.where(rho > 0, rho, 1.0), np.inf)
        value = np.where(x == 0, 1.0, np.sqrt(1 + ratio**2))
    return _scalar_or_array(value.astype(float))


def thm1_lhs(lam, m, norm3):
    """Left-hand side ``C f(lambda, m) ||V||_3`` of the L3 criterion (``+inf`` when f is)."""
    norm3 = _check_norm(norm3, 'norm3')
    f_value = np.asarray(f_function(lam, m))
    with np.errstate(invalid='ignore'):
        value = np.where(np.isinf(f_value), np.inf, C_THM1 * f_value * norm3)
    return _scalar_or_array(value)


def thm2_lhs(lam, norm3, norm32):
    """Left-hand side ``C ||V||_3 + C' |Re lambda| ||V||_{3/2}``; independent of the mass."""
    norm3 = _check_norm(norm3, 'norm3')
    norm32 = _check_norm(norm32, 'norm32')
    x = np.abs(np.asarray(lam, dtype=complex).real)
    with np.errstate(invalid='ignore'):
        second = np.where(x == 0, 0.0, C_THM2 * x * norm32)
    return _scalar_or_array(C_THM1 * norm3 + second)


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one exclusion criterion at one spectral point."""

    lhs: float
    certified: bool


def certify_thm1(lam, m, norm3):
    """Evaluate the L3 criterion ``C f(lambda, m) ||V||_3 < 1`` at one point.

    >>> certify_thm1(2j, 1, 0.5).certified
    True
    >>> certify_thm1(1.0, 1, 0.0).certified
    False

    """
    lhs = float(thm1_lhs(complex(lam), m, norm3))
    return CriterionResult(lhs=lhs, certified=bool(lhs < 1))


def certify_thm2(lam, norm3, norm32):
    """Evaluate ``C ||V||_3 + C' |Re lambda| ||V||_{3/2} < 1`` at one point."""
    lhs = float(thm2_lhs(complex(lam), norm3, norm32))
    return CriterionResult(lhs=lhs, certified=bool(lhs < 1))


def thm2_real_halfwidth(norm3, norm32):
    """Half-width ``w`` of the strip ``|Re lambda| < w`` where the mass-free criterion holds.

    Returns 0 when ``C ||V||_3 >= 1`` and ``+inf`` when ``||V||_{3/2} = 0`` otherwise.
    """
    budget = 1 - C_THM1 * float(_check_norm(norm3, 'norm3'))
    norm32 = float(_check_norm(norm32, 'norm32'))
    if budget <= 0:
        return 0.0
    if norm32 == 0:
        return float('inf')
    return budget / (C_THM2 * norm32)


@dataclass(frozen=True)
class EnclosureReport:
    """Certification record of a single spectral point."""

    lam: complex
    m: float
    norm3: float
    norm32: float | None
    f_value: float
    thm1_lhs: float
    thm2_lhs: float | None
    thm1_certified: bool
    thm2_certified: bool
    certified: bool
    reasons: tuple = ()
    provenance: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        """Flatten into plain Python values (complex split into real and imaginary parts)."""
        return {
            'lambda_re': self.lam.real,
            'lambda_im': self.lam.imag,
            'm': self.m,
            'norm3': self.norm3,
            'norm32': self.norm32,
            'f': self.f_value,
            'thm1_lhs': self.thm1_lhs,
            'thm2_lhs': self.thm2_lhs,
            'thm1_certified': self.thm1_certified,
            'thm2_certified': self.thm2_certified,
            'certified': self.certified,
            'reasons': list(self.reasons),
        }


def certify(lam, m, norm3, norm32=None, provenance=None):
    """Evaluate both criteria at ``lambda`` and combine them.

    Parameters
    ----------
    lam : complex
        Spectral point.
    m : float
        Mass (nonnegative).
    norm3 : float
        ``L^3`` norm of ``|V|``.
    norm32 : float, optional
        ``L^{3/2}`` norm of ``|V|``; the mass-independent criterion is skipped without it.
    provenance : dict, optional
        Where each norm came from; copied into the report.

    Returns
    -------
    :class:`EnclosureReport`
    """
    lam = complex(lam)
    m = float(m)
    if not m >= 0:
        raise ConfigurationError(f'The mass must be nonnegative, got {m}.')

    f_value = float(f_function(lam, m))
    first = certify_thm1(lam, m, norm3)
    reasons = []
    if np.isinf(f_value):
        reasons.append(REASON_ESSENTIAL_SPECTRUM)
    elif first.certified:
        reasons.append(f'L3 criterion holds: {first.lhs:.6g} < 1')
    else:
        reasons.append(f'L3 criterion fails: {first.lhs:.6g} >= 1')

    second = None
    if norm32 is None:
        reasons.append('no L3/2 norm given: mass-independent criterion not evaluated')
    else:
        second = certify_thm2(lam, norm3, norm32)
        relation = '<' if second.certified else '>='
        verb = 'holds' if second.certified else 'fails'
        reasons.append(f'mass-independent criterion {verb}: {second.lhs:.6g} {relation} 1')

    thm2_certified = bool(second is not None and second.certified)
    report = EnclosureReport(
        lam=lam,
        m=m,
        norm3=float(norm3),
        norm32=None if norm32 is None else float(norm32),
        f_value=f_value,
        thm1_lhs=first.lhs,
        thm2_lhs=None if second is None else second.lhs,
        thm1_certified=first.certified,
        thm2_certified=thm2_certified,
        certified=first.certified or thm2_certified,
        reasons=tuple(reasons),
        provenance=dict(provenance or {}),
    )
    LGR.debug('Certification at lambda=%s, m=%s: %s', lam, m, report.certified)
    return report


@dataclass(frozen=True)
class GridSpec:
    """A rectangular lattice ``[re_min, re_max] x [im_min, im_max]`` with given point counts."""

    re_min: float
    re_max: float
    re_count: int
    im_min: float
    im_max: float
    im_count: int

    def __post_init__(self):
        for name in ('re_count', 'im_count'):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise ConfigurationError(f'Grid {name} must be an integer >= 2, got {value}.')
            object.__setattr__(self, name, int(value))
        for low, high in (('re_min', 're_max'), ('im_min', 'im_max')):
            lo, hi = float(getattr(self, low)), float(getattr(self, high))
            if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
                raise ConfigurationError(
                    f'Grid range [{lo}, {hi}] is empty or not finite ({low} < {high} required).'
                )
            object.__setattr__(self, low, lo)
            object.__setattr__(self, high, hi)

    @classmethod
    def from_string(cls, value):
        """Parse ``'REMIN,REMAX,NRE,IMMIN,IMMAX,NIM'``.

        >>> GridSpec.from_string('-10,10,201,-10,10,201').size
        40401

        """
        parts = [item.strip() for item in str(value).split(',')]
        if len(parts) != 6:
            raise ConfigurationError(
                f'Grid spec "{value}" must have six comma-separated fields '
                '(REMIN,REMAX,NRE,IMMIN,IMMAX,NIM).'
            )
        try:
            re_min, re_max, im_min, im_max = (float(parts[i]) for i in (0, 1, 3, 4))
            re_count, im_count = int(parts[2]), int(parts[5])
        except ValueError as e:
            raise ConfigurationError(f'Grid spec "{value}" is not numeric: {e}') from e
        return cls(re_min, re_max, re_count, im_min, im_max, im_count)

    def __str__(self):
        return (
            f'{self.re_min:.17g},{self.re_max:.17g},{self.re_count},'
            f'{self.im_min:.17g},{self.im_max:.17g},{self.im_count}'
        )

    @property
    def size(self):
        """Number of lattice points."""
        return self.re_count * self.im_count

    @staticmethod
    def _axis(low, high, count):
        coords = np.linspace(low, high, count)
        # put points within rounding distance of an axis on it
        coords[np.abs(coords) <= 1e-12 * max(abs(low), abs(high))] = 0.0
        return coords

    @property
    def re_values(self):
        """Real parts, ascending."""
        return self._axis(self.re_min, self.re_max, self.re_count)

    @property
    def im_values(self):
        """Imaginary parts, ascending."""
        return self._axis(self.im_min, self.im_max, self.im_count)


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Per-point criteria over a :class:`GridSpec`.

    ``cells`` holds one row per lattice point, ordered with the imaginary part as the outer
    (slow) index and the real part as the inner (fast) index, both ascending; cell
    ``(i, j)`` is row ``j * re_count + i``.
    """

    grid: GridSpec
    m: float
    norm3: float
    norm32: float | None
    cells: pd.DataFrame

    def __len__(self):
        return len(self.cells)

    def cell(self, i, j):
        """The :class:`EnclosureReport` at ``lambda = re_i + i im_j``."""
        row = self.cells.iloc[j * self.grid.re_count + i]
        return certify(complex(row['re'], row['im']), self.m, self.norm3, self.norm32)

    def reports(self):
        """Iterate over :class:`EnclosureReport` records in row order."""
        for row in self.cells.itertuples(index=False):
            yield certify(complex(row.re, row.im), self.m, self.norm3, self.norm32)


def raster(grid, m, norm3, norm32=None):
    """Evaluate ``f`` and both criteria on every point of a lattice.

    Parameters
    ----------
    grid : :class:`GridSpec` or str
        Lattice, or its ``'REMIN,REMAX,NRE,IMMIN,IMMAX,NIM'`` string form.
    m : float
        Mass.
    norm3 : float
        ``L^3`` norm of ``|V|``.
    norm32 : float, optional
        ``L^{3/2}`` norm of ``|V|``. Without it ``thm2_lhs`` is NaN, ``thm2_certified`` is
        False and ``certified`` equals the L3 verdict.

    Returns
    -------
    :class:`RegionGrid`
    """
    if not isinstance(grid, GridSpec):
        grid = GridSpec.from_string(grid)
    m = float(m)
    if not m >= 0:
        raise ConfigurationError(f'The mass must be nonnegative, got {m}.')

    re_grid, im_grid = np.meshgrid(grid.re_values, grid.im_values)
    re_flat, im_flat = re_grid.ravel(), im_grid.ravel()
    lam = re_flat + 1j * im_flat

    f_values = f_function(lam, m)
    first = thm1_lhs(lam, m, norm3)
    first_ok = first < 1
    if norm32 is None:
        second = np.full(lam.shape, np.nan)
        second_ok = np.zeros(lam.shape, dtype=bool)
    else:
        second = thm2_lhs(lam, norm3, norm32)
        second_ok = second < 1

    cells = pd.DataFrame(
        {
            're': re_flat,
            'im': im_flat,
            'f': f_values,
            'thm1_lhs': first,
            'thm2_lhs': second,
            'thm1_certified': first_ok,
            'thm2_certified': second_ok,
            'certified': first_ok | second_ok,
        }
    )
    LGR.log(
        15,
        'Rasterized %d points (m=%g): %d certified.',
        grid.size,
        m,
        int(cells['certified'].sum()),
    )
    return RegionGrid(
        grid=grid,
        m=m,
        norm3=float(norm3),
        norm32=None if norm32 is None else float(norm32),
        cells=cells,
    )
