# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
#
# Copyright 2026 The dirac-enclosure Developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
r"""
A Python module to maintain unique, run-wide *dirac-enclosure* settings.

This module implements the memory structures to keep a consistent, singleton config.
Every command that writes an output file leaves a copy of its settings next to it, as
``<stem>_config.toml`` (e.g., ``region_config.toml`` for ``--out region.txt``), so that the
run can be repeated with ``--config-file``.
Settings are stored using :abbr:`ToML (Tom's Markup Language)`.
The module has a :py:func:`~dirac_enclosure.config.to_filename` function to allow writing out
the settings to hard disk in *ToML* format, which looks like:

.. literalinclude:: ../src/dirac_enclosure/data/tests/config.toml
   :language: toml
   :name: dirac_enclosure.toml
   :caption: **Example file representation of dirac-enclosure settings**.

Configuration sections
----------------------
.. autoclass:: environment
   :members:
.. autoclass:: execution
   :members:
.. autoclass:: spectral
   :members:
.. autoclass:: seeds
   :members:

Usage
-----
.. code-block:: Python

    from dirac_enclosure import config
    config.spectral.mass = 5.0
    config.to_filename('region_config.toml')
    # ... later, possibly in another process
    config.load('region_config.toml')
    # Access configs from any code section as:
    value = config.section.setting

Logging
-------
.. autoclass:: loggers
   :members:

"""

import logging
import os
import random
import sys
from pathlib import Path
from time import strftime
from uuid import uuid4

import numpy as np
import pandas as pd
import scipy

from dirac_enclosure import __version__

logging.addLevelName(25, 'IMPORTANT')  # Add a new level between INFO and WARNING
logging.addLevelName(15, 'VERBOSE')  # Add a new level between INFO and DEBUG

COMMANDS = ('certify', 'raster', 'bsnorm', 'check')
"""Subcommands of the command line."""

CONFIG_SUFFIX = '_config.toml'


class _Config:
    """An abstract class forbidding instantiation."""

    _paths = ()

    def __init__(self):
        """Avert instantiation."""
        raise RuntimeError('Configuration type is not instantiable.')

    @classmethod
    def load(cls, settings, init=True, ignore=None):
        """Store settings from a dictionary."""
        ignore = ignore or {}
        for k, v in settings.items():
            if k in ignore or v is None:
                continue

            if k in cls._paths:
                setattr(cls, k, Path(v).absolute())
            elif hasattr(cls, k):
                setattr(cls, k, v)

        if init:
            try:
                cls.init()
            except AttributeError:
                pass

    @classmethod
    def get(cls):
        """Return defined settings."""
        out = {}
        for k, v in cls.__dict__.items():
            if k.startswith('_') or v is None:
                continue

            if callable(getattr(cls, k)):
                continue

            if k in cls._paths:
                v = str(v)
            elif isinstance(v, complex):
                # ToML has no complex type
                v = [v.real, v.imag]

            out[k] = v
        return out


class environment(_Config):
    """
    Read-only options regarding the platform and environment.

    The ``environment`` section is not loaded in from file,
    only written out when settings are exported, so that a stored run
    documents the numerical stack it was computed with.
    """

    cpu_count = os.cpu_count()
    """Number of available CPUs."""
    exec_env = os.name
    """A string representing the execution platform."""
    numpy_version = np.__version__
    """NumPy's current version."""
    scipy_version = scipy.__version__
    """SciPy's current version."""
    pandas_version = pd.__version__
    """pandas' current version."""
    version = __version__
    """*dirac-enclosure*'s version."""


class execution(_Config):
    """Configure run-level settings."""

    command = None
    """The subcommand being run, one of :data:`COMMANDS`."""
    config_file = None
    """Settings file this run was initialized from, if any."""
    log_level = 25
    """Output verbosity."""
    output_path = None
    """Where the result file (grid file or report) is written."""
    run_uuid = f"{strftime('%Y%m%d-%H%M%S')}_{uuid4()}"
    """Unique identifier of this particular run."""

    _paths = (
        'config_file',
        'output_path',
    )

    @classmethod
    def init(cls):
        """Check that the command is known."""
        if cls.command is not None and cls.command not in COMMANDS:
            raise ValueError(f'Unknown command "{cls.command}".')

    @classmethod
    def settings_path(cls):
        """``<stem>_config.toml`` next to :attr:`output_path` (``None`` without output)."""
        if cls.output_path is None:
            return None
        output = Path(cls.output_path)
        return output.with_name(output.stem + CONFIG_SUFFIX)


class spectral(_Config):
    """Spectral point, potential and numerical settings of the run."""

    mass = None
    """Mass ``m >= 0`` of the free Dirac operator."""
    spectral_point = None
    """The point ``lambda`` to certify (or ``z`` for ``bsnorm``)."""
    grid = None
    """Lattice ``REMIN,REMAX,NRE,IMMIN,IMMAX,NIM`` rasterized by ``raster``."""
    potential = None
    """Potential as ``NAME:params`` (see :func:`~dirac_enclosure.utils.potential.from_spec`)."""
    norm3 = None
    """Declared ``L^3`` norm of ``|V|``; takes precedence over quadrature."""
    norm32 = None
    """Declared ``L^{3/2}`` norm of ``|V|``; takes precedence over quadrature."""
    tolerance = 1e-6
    """Relative accuracy requested from the norm quadrature."""
    nodes = 512
    """Number of quadrature nodes of the Birman-Schwinger discretization."""
    scheme = 'monte_carlo'
    """Node scheme of the Birman-Schwinger discretization."""
    half_width = 3.0
    """Half side length of the node box of the Birman-Schwinger discretization."""
    iterations = 2000
    """Iteration cap of the power iteration."""
    representation = 'standard'
    """Representation of the Dirac matrices."""

    @classmethod
    def init(cls):
        """Restore the spectral point from its ToML form."""
        if isinstance(cls.spectral_point, list | tuple):
            real, imag = cls.spectral_point
            cls.spectral_point = complex(real, imag)


class loggers:
    """Keep loggers easily accessible (see :py:func:`init`)."""

    _fmt = '%(asctime)s,%(msecs)d %(name)-2s %(levelname)-2s:\n\t %(message)s'
    _datefmt = '%y%m%d-%H:%M:%S'

    default = logging.getLogger()
    """The root logger."""
    cli = logging.getLogger('cli')
    """Command-line interface logging."""
    library = logging.getLogger('dirac_enclosure')
    """Parent of the loggers of all library modules."""

    @classmethod
    def init(cls):
        """
        Set the log level, initialize all loggers into :py:class:`loggers`.

            * Add new logger levels (25: IMPORTANT, and 15: VERBOSE).
            * Add a new sub-logger (``cli``).
            * Logger configuration. Messages go to *stderr*, so that reports
              printed on *stdout* can be piped.

        """
        for logger in (cls.cli, cls.library):
            if not logger.hasHandlers():
                _handler = logging.StreamHandler(stream=sys.stderr)
                _handler.setFormatter(logging.Formatter(fmt=cls._fmt, datefmt=cls._datefmt))
                logger.addHandler(_handler)
            logger.setLevel(execution.log_level)
        cls.default.setLevel(execution.log_level)


class seeds(_Config):
    """Initialize the PRNG and track random seed assignments"""

    _random_seed = None
    master = None
    """Master random seed to initialize the Pseudorandom Number Generator (PRNG)"""
    numpy = None
    """Seed given to :func:`numpy.random.default_rng` for node sampling and power iteration"""

    @classmethod
    def init(cls):
        if cls._random_seed is not None:
            cls.master = cls._random_seed
        if cls.master is None:
            cls.master = random.randint(1, 65536)
        random.seed(cls.master)  # initialize the PRNG
        # ``--seed N`` reproduces ``monte_carlo(..., seed=N)`` directly
        cls.numpy = cls.master


def from_dict(settings, init=True, ignore=None):
    """Read settings from a flat dictionary.

    Arguments
    ---------
    setting : dict
        Settings to apply to any configuration
    init : `bool` or :py:class:`~collections.abc.Container`
        Initialize all, none, or a subset of configurations.
    ignore : :py:class:`~collections.abc.Container`
        Collection of keys in ``setting`` to ignore
    """

    # Accept global True/False or container of configs to initialize
    def initialize(x):
        return init if init in (True, False) else x in init

    execution.load(settings, init=initialize('execution'), ignore=ignore)
    spectral.load(settings, init=initialize('spectral'), ignore=ignore)
    seeds.load(settings, init=initialize('seeds'), ignore=ignore)

    loggers.init()


def load(filename, skip=None, init=True):
    """Load settings from file.

    A file written by a newer version of *dirac-enclosure* is loaded with a warning.

    Arguments
    ---------
    filename : :py:class:`os.PathLike`
        TOML file containing dirac-enclosure configuration.
    skip : dict or None
        Sets of values to ignore during load, keyed by section name
    init : `bool` or :py:class:`~collections.abc.Container`
        Initialize all, none, or a subset of configurations.
    """
    from packaging.version import InvalidVersion, Version
    from toml import loads

    skip = skip or {}

    # Accept global True/False or container of configs to initialize
    def initialize(x):
        return init if init in (True, False) else x in init

    filename = Path(filename)
    settings = loads(filename.read_text())

    written_by = settings.get('environment', {}).get('version')
    try:
        newer = written_by is not None and Version(written_by) > Version(environment.version)
    except InvalidVersion:
        newer = False
    if newer:
        loggers.cli.warning(
            f'{filename} was written by dirac-enclosure {written_by}, '
            f'newer than this installation ({environment.version}).'
        )

    for sectionname, configs in settings.items():
        if sectionname != 'environment':
            section = getattr(sys.modules[__name__], sectionname)
            ignore = skip.get(sectionname)
            section.load(configs, ignore=ignore, init=initialize(sectionname))


def get(flat=False):
    """Get config as a dict."""
    settings = {
        'environment': environment.get(),
        'execution': execution.get(),
        'spectral': spectral.get(),
        'seeds': seeds.get(),
    }
    if not flat:
        return settings

    return {
        '.'.join((section, k)): v
        for section, configs in settings.items()
        for k, v in configs.items()
    }


def dumps():
    """Format config into toml."""
    from toml import dumps

    return dumps(get())


def to_filename(filename):
    """Write settings to file."""
    filename = Path(filename)
    filename.write_text(dumps())
