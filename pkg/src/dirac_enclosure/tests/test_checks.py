"""Tests for dirac_enclosure.utils.checks."""

import numpy as np
import pytest

from dirac_enclosure.utils.checks import (
    algebra_suite,
    constants_suite,
    dominance_suite,
    f_symmetry_suite,
    hs_oracle_suite,
    run_checks,
)
from dirac_enclosure.utils.dirac import DiracBasis, dirac_basis


def _corrupted_basis(representation):
    """The chosen representation with alpha_4 replaced by the identity."""
    alpha = dirac_basis(representation).alpha.copy()
    alpha[3] = np.eye(4)
    return DiracBasis(alpha=alpha, representation=representation)


def test_all_suites_pass():
    results = run_checks(seed=0)
    assert [r.name for r in results] == [
        'anticommutation',
        'hs_oracle',
        'dominance',
        'constants',
        'f_symmetry',
    ]
    for result in results:
        assert result.passed, result
        assert result.checked > 0


def test_suite_sizes(rng):
    assert hs_oracle_suite(rng, samples=10).checked == 20
    assert dominance_suite(rng, points=8, radii=5).checked == 40
    assert algebra_suite().checked == 6


def test_constants_notes():
    result = constants_suite()
    assert result.passed
    assert any(note.startswith('C = 1.488000723994') for note in result.notes)


def test_f_symmetry_suite(rng):
    result = f_symmetry_suite(rng, samples=500)
    assert result.passed


def test_corrupted_basis_is_detected(rng):
    result = algebra_suite(_corrupted_basis)
    assert not result.passed
    assert result.failed >= 2
    assert any('anticommutation' in note for note in result.notes)

    # the oracle no longer matches either
    assert not hs_oracle_suite(rng, _corrupted_basis, samples=50).passed


def test_run_checks_with_corrupted_basis():
    results = {r.name: r for r in run_checks(seed=1, basis_factory=_corrupted_basis)}
    assert not results['anticommutation'].passed
    assert not results['hs_oracle'].passed
    assert results['constants'].passed


@pytest.mark.parametrize('seed', [0, 7])
def test_run_checks_is_reproducible(seed):
    first = run_checks(seed=seed)
    second = run_checks(seed=seed)
    assert [(r.checked, r.failed, r.notes) for r in first] == [
        (r.checked, r.failed, r.notes) for r in second
    ]
