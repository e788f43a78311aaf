"""Self-validation suites run by ``dirac-enclosure check``.

Each suite compares a library routine against an independent oracle on random or
structured samples and returns a :class:`SuiteResult` with the number of comparisons made
and the number that failed.
"""

import logging
from dataclasses import dataclass

import numpy as np

from dirac_enclosure.utils import constants
from dirac_enclosure.utils.dirac import (
    REPRESENTATIONS,
    anticommutation_residual,
    dirac_basis,
    hermiticity_residual,
    hs_norm,
    trace_residual,
)
from dirac_enclosure.utils.enclosure import constant_C, constant_Cprime, f_function
from dirac_enclosure.utils.resolvent import SpectralPoint, hs_bound, hs_closed_form, kernel

LGR = logging.getLogger(__name__)

ALGEBRA_TOL = 1e-14
HS_RTOL = 1e-12
CONSTANTS_RTOL = 1e-12
F_RTOL = 1e-12

HS_SAMPLES = 1000
DOMINANCE_POINTS = 1000
DOMINANCE_RADII = 100
F_SAMPLES = 10000


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one validation suite."""

    name: str
    checked: int
    failed: int
    notes: tuple = ()

    @property
    def passed(self):
        return self.checked > 0 and self.failed == 0


def algebra_suite(basis_factory=dirac_basis):
    """Anticommutation, trace and Hermiticity identities in every representation."""
    checked = failed = 0
    notes = []
    for representation in REPRESENTATIONS:
        basis = basis_factory(representation)
        for label, residual in (
            ('anticommutation', anticommutation_residual(basis)),
            ('trace', trace_residual(basis)),
            ('hermiticity', hermiticity_residual(basis)),
        ):
            checked += 1
            if not residual <= ALGEBRA_TOL:
                failed += 1
                notes.append(f'{representation}: {label} residual {residual:.3g}')
    return SuiteResult('anticommutation', checked, failed, tuple(notes))


def _random_point(rng):
    z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
    return SpectralPoint(z, rng.uniform(0, 5))


def hs_oracle_suite(rng, basis_factory=dirac_basis, samples=HS_SAMPLES):
    """Squared HS norm of the evaluated kernel against its closed form."""
    checked = failed = 0
    worst = 0.0
    for representation in REPRESENTATIONS:
        basis = basis_factory(representation)
        for _ in range(samples):
            point = _random_point(rng)
            x, xp = rng.normal(scale=2.0, size=(2, 3))
            value = hs_norm(kernel(point, x, xp, basis=basis).matrix) ** 2
            expected = hs_closed_form(point, np.linalg.norm(x - xp))
            error = abs(value - expected) / expected
            worst = max(worst, error)
            checked += 1
            failed += int(not error <= HS_RTOL)
    return SuiteResult('hs_oracle', checked, failed, (f'largest relative error {worst:.3g}',))


def dominance_suite(rng, points=DOMINANCE_POINTS, radii=DOMINANCE_RADII):
    """``hs_bound >= hs_closed_form``, including points on the spectrum of ``H_0``."""
    checked = failed = 0
    for index in range(points):
        m = rng.uniform(0, 5)
        if index % 4 == 0:
            # real z with |z| >= m
            z = rng.choice((-1, 1)) * (m + rng.exponential(2.0))
        else:
            z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        point = SpectralPoint(z, m)
        r = 10.0 ** rng.uniform(-3, 2, radii)
        violations = np.asarray(hs_bound(point, r)) < np.asarray(hs_closed_form(point, r))
        checked += radii
        failed += int(np.count_nonzero(violations))
    return SuiteResult('dominance', checked, failed)


def _constant_table():
    e1, e2 = np.exp(-1), np.exp(-2)
    cbrt_half_pi = np.cbrt(np.pi / 2)
    c1 = np.sqrt(1 + e1 + 2 * e2) / (2 * np.pi)
    return (
        ('c1', constants.C1, c1),
        ('c2', constants.C2, np.sqrt(2) / (2 * np.pi)),
        ('c2~', constants.C2_TILDE, np.sqrt(2) / (2 * np.pi) * e1),
        ('C', constants.C_THM1, constant_C()),
        ("C'", constants.C_THM2, constant_Cprime()),
        ('C = c1 * HLS', constants.C_THM1, c1 * 2 ** (2 / 3) * np.pi ** (4 / 3)),
        ('C = (pi/2)^(1/3) 2 pi c1', constants.C_THM1, cbrt_half_pi * 2 * np.pi * c1),
        ('lemma coefficient', constants.LEMMA_COEFF, cbrt_half_pi * np.sqrt(1 + e1 + e2)),
        ('HLS constant', constants.HLS_CONSTANT, 2 ** (2 / 3) * np.pi ** (4 / 3)),
        ('(2 pi^2)^(1/3)', constants.RELATIVE_BOUND, np.cbrt(2 * np.pi**2)),
        ('gaussian L3', constants.GAUSS_L3, np.sqrt(np.pi / 3)),
        ('gaussian L3/2', constants.GAUSS_L32, 2 * np.pi / 3),
        ('2/pi', constants.KATO_CONSTANT, 2 / np.pi),
    )


def constants_suite():
    """Embedded literals against their closed forms, plus the advertised approximations."""
    checked = failed = 0
    notes = []
    for name, literal, recomputed in _constant_table():
        checked += 1
        ok = abs(literal - recomputed) <= CONSTANTS_RTOL * abs(recomputed)
        failed += int(not ok)
        notes.append(f'{name} = {recomputed:.12f}' + ('' if ok else f' (literal {literal!r})'))

    for name, value, rounded in (('C', constant_C(), 1.5), ("C'", constant_Cprime(), 1.1)):
        checked += 1
        if not abs(value - rounded) <= 0.02:
            failed += 1
            notes.append(f'{name} = {value:.6f} is not within 0.02 of {rounded}')
    return SuiteResult('constants', checked, failed, tuple(notes))


def f_symmetry_suite(rng, samples=F_SAMPLES):
    """Massless identity, conjugation symmetry and finiteness pattern of ``f``."""
    checked = failed = 0

    im = rng.choice((-1, 1), samples) * 10.0 ** rng.uniform(-3, 1, samples)
    lam = rng.uniform(-10, 10, samples) + 1j * im
    massless = np.asarray(f_function(lam, 0.0))
    expected = np.abs(lam) / np.abs(lam.imag)
    checked += samples
    failed += int(np.count_nonzero(~(np.abs(massless - expected) <= F_RTOL * expected)))

    for m in (0.0, 1.0, 5.0):
        values = np.asarray(f_function(lam, m))
        mirrored = np.asarray(f_function(lam.conj(), m))
        checked += samples
        failed += int(np.count_nonzero(~np.isclose(values, mirrored, rtol=1e-14, atol=0)))

    for m in (0.0, 1.0, 5.0):
        re = np.linspace(-3 * m - 2, 3 * m + 2, 41)
        re = np.concatenate((re, [-m, m]))
        for im in (0.0, 1e-8, -1e-8, 1e-3, 1.0):
            sweep = re + 1j * im
            if m == 0 and im == 0:
                # f(0, 0) = 1 by convention although 0 lies in the spectrum
                sweep = sweep[sweep.real != 0]
            finite = np.isfinite(np.asarray(f_function(sweep, m)))
            on_spectrum = (sweep.imag == 0) & (np.abs(sweep.real) >= m)
            checked += sweep.size
            failed += int(np.count_nonzero(finite == on_spectrum))
    return SuiteResult('f_symmetry', checked, failed)


def run_checks(seed=0, basis_factory=dirac_basis):
    """Run every suite and return their results in a fixed order.

    Parameters
    ----------
    seed : int
        Seed of :func:`numpy.random.default_rng` shared by the random suites.
    basis_factory : callable
        Maps a representation name to a
        :class:`~dirac_enclosure.utils.dirac.DiracBasis`. Tests substitute a corrupted
        factory here to make sure the suites can fail.

    Returns
    -------
    list of :class:`SuiteResult`
    """
    rng = np.random.default_rng(seed)
    results = [
        algebra_suite(basis_factory),
        hs_oracle_suite(rng, basis_factory),
        dominance_suite(rng),
        constants_suite(),
        f_symmetry_suite(rng),
    ]
    for result in results:
        LGR.log(
            25 if result.passed else logging.WARNING,
            'Suite %s: %d checked, %d failed.',
            result.name,
            result.checked,
            result.failed,
        )
    return results
