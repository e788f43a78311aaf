"""Fixtures for the test-suite."""

import importlib.resources

import numpy as np
import pytest


@pytest.fixture(scope='session')
def data_dir():
    """Grab data directory."""
    test_data = importlib.resources.files('dirac_enclosure.data') / 'tests'
    with importlib.resources.as_file(test_data) as data:
        yield data


@pytest.fixture
def rng():
    """A freshly seeded generator, so that every test sees the same draws."""
    return np.random.default_rng(20260417)


@pytest.fixture(scope='session')
def base_config():
    from dirac_enclosure.tests.tests import mock_config

    return mock_config


@pytest.fixture
def clean_config():
    """Restore the configuration singleton after tests that run the command line."""
    from dirac_enclosure.tests.tests import restored_config

    with restored_config():
        yield
