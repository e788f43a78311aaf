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
"""Parser."""

from dirac_enclosure import config


def _build_parser(**kwargs):
    """Build parser object.

    ``kwargs`` are passed to ``argparse.ArgumentParser`` (mainly useful for debugging).
    """

    from argparse import SUPPRESS, ArgumentDefaultsHelpFormatter, ArgumentParser
    from functools import partial
    from pathlib import Path

    from packaging.version import Version

    from dirac_enclosure.exceptions import ConfigurationError
    from dirac_enclosure.utils.birman_schwinger import MAX_MATRIX_SIZE, SCHEMES
    from dirac_enclosure.utils.dirac import REPRESENTATIONS
    from dirac_enclosure.utils.enclosure import GridSpec
    from dirac_enclosure.utils.potential import from_spec

    def _min_one(value, parser):
        """Ensure an argument is not lower than 1."""
        value = int(value)
        if value < 1:
            raise parser.error("Argument can't be less than one.")
        return value

    def _nonnegative(value, parser):
        """Ensure an argument is a finite number not lower than 0."""
        value = float(value)
        if not 0 <= value < float('inf'):
            raise parser.error(f'Argument must be a finite nonnegative number, got {value}.')
        return value

    def _positive(value, parser):
        value = _nonnegative(value, parser)
        if value == 0:
            raise parser.error('Argument must be strictly positive.')
        return value

    def _tolerance(value, parser):
        value = float(value)
        if not 0 < value <= 0.1:
            raise parser.error(f'The tolerance must lie in (0, 0.1], got {value}.')
        return value

    def _complex_pair(value, parser):
        """Parse ``RE,IM`` into a complex number."""
        parts = value.split(',')
        try:
            real, imag = (float(p) for p in parts)
        except ValueError as e:
            raise parser.error(
                f'Expected RE,IM (two comma-separated numbers), got "{value}".'
            ) from e
        return complex(real, imag)

    def _grid(value, parser):
        try:
            return str(GridSpec.from_string(value))
        except ConfigurationError as e:
            raise parser.error(str(e)) from e

    def _potential(value, parser):
        try:
            from_spec(value)
        except ConfigurationError as e:
            raise parser.error(str(e)) from e
        return value

    verstr = f'dirac-enclosure v{config.environment.version}'
    currentv = Version(config.environment.version)
    is_release = not any((currentv.is_devrelease, currentv.is_prerelease, currentv.is_postrelease))

    parser = ArgumentParser(
        description=(
            'dirac-enclosure: certified eigenvalue-free regions for non-self-adjoint Dirac '
            f'operators v{config.environment.version}'
            + ('' if is_release else ' (development version)')
        ),
        formatter_class=ArgumentDefaultsHelpFormatter,
        **kwargs,
    )
    PositiveInt = partial(_min_one, parser=parser)
    NonNegative = partial(_nonnegative, parser=parser)
    Positive = partial(_positive, parser=parser)
    Tolerance = partial(_tolerance, parser=parser)
    ComplexPair = partial(_complex_pair, parser=parser)
    Grid = partial(_grid, parser=parser)
    Potential = partial(_potential, parser=parser)

    parser.add_argument(
        'command',
        choices=config.COMMANDS,
        help=(
            "'certify' a spectral point, 'raster' a region of the complex plane, estimate the "
            "Birman-Schwinger norm ('bsnorm'), or run the self-validation suites ('check')."
        ),
    )

    g_spectral = parser.add_argument_group('Spectral point and mass')
    g_spectral.add_argument(
        '--m',
        '--mass',
        dest='mass',
        type=NonNegative,
        default=SUPPRESS,
        help='Mass m >= 0 of the free Dirac operator.',
    )
    g_spectral.add_argument(
        '--lambda',
        dest='spectral_point',
        metavar='RE,IM',
        type=ComplexPair,
        default=SUPPRESS,
        help='Spectral point (certify, bsnorm).',
    )
    g_spectral.add_argument(
        '--grid',
        metavar='REMIN,REMAX,NRE,IMMIN,IMMAX,NIM',
        type=Grid,
        default=SUPPRESS,
        help='Lattice of spectral points (raster). Both counts must be at least 2.',
    )
    g_spectral.add_argument(
        '--representation',
        choices=REPRESENTATIONS,
        default=SUPPRESS,
        help='Representation of the Dirac matrices (default: standard).',
    )

    g_potential = parser.add_argument_group('Potential and norms')
    g_potential.add_argument(
        '--potential',
        metavar='NAME:params',
        type=Potential,
        default=SUPPRESS,
        help=(
            'Potential whose norms are computed by quadrature, e.g. gaussian:v0=0.1,width=1, '
            'cutoff_coulomb:Z=1,R=1, bump:v0=0.5,R=1 or declared:norm3=0.3,norm32=0.1.'
        ),
    )
    g_potential.add_argument(
        '--norm3',
        metavar='X',
        type=NonNegative,
        default=SUPPRESS,
        help='Declared L3 norm of |V|; overrides quadrature.',
    )
    g_potential.add_argument(
        '--norm32',
        metavar='X',
        type=NonNegative,
        default=SUPPRESS,
        help='Declared L3/2 norm of |V|; overrides quadrature.',
    )
    g_potential.add_argument(
        '--tol',
        dest='tolerance',
        metavar='X',
        type=Tolerance,
        default=SUPPRESS,
        help='Relative accuracy of the norm quadrature (default: 1e-6).',
    )

    g_bs = parser.add_argument_group('Options for the Birman-Schwinger estimate')
    g_bs.add_argument(
        '--nodes',
        metavar='N',
        type=PositiveInt,
        default=SUPPRESS,
        help=f'Number of quadrature nodes, at most {MAX_MATRIX_SIZE // 4} (default: 512).',
    )
    g_bs.add_argument(
        '--scheme',
        choices=SCHEMES,
        default=SUPPRESS,
        help='Node scheme; tensor_gauss uses the cube root of --nodes per axis '
        '(default: monte_carlo).',
    )
    g_bs.add_argument(
        '--half-width',
        metavar='L',
        type=Positive,
        default=SUPPRESS,
        help='Nodes fill the box [-L, L]^3 around the potential centre (default: 3).',
    )
    g_bs.add_argument(
        '--iterations',
        metavar='N',
        type=PositiveInt,
        default=SUPPRESS,
        help='Iteration cap of the power iteration (default: 2000).',
    )
    g_bs.add_argument(
        '--seed',
        dest='_random_seed',
        metavar='N',
        type=int,
        default=None,
        help='Seed of node sampling, power iteration and the check suites '
        '(drawn at random if not given).',
    )

    g_outputs = parser.add_argument_group('Options for modulating outputs')
    g_outputs.add_argument(
        '--out',
        dest='output_path',
        metavar='PATH',
        type=Path,
        default=None,
        help='Write the result here (grid file for raster, ToML report otherwise) instead of '
        'standard output. The run settings are saved next to it as <stem>_config.toml.',
    )

    g_other = parser.add_argument_group('Other options')
    g_other.add_argument('--version', action='version', version=verstr)
    g_other.add_argument(
        '-v',
        '--verbose',
        dest='verbose_count',
        action='count',
        default=0,
        help='Increases log verbosity for each occurrence, debug level is -vvv',
    )
    g_other.add_argument(
        '--config-file',
        action='store',
        metavar='FILE',
        help='Use pre-generated configuration file. Values in file will be overridden '
        'by command-line arguments.',
    )

    return parser


_DASHED_VALUES = ('--grid', '--lambda')


def _attach_dashed_values(args):
    """Glue ``--grid``/``--lambda`` to a value starting with a minus sign.

    argparse takes a token such as ``-10,10,5,-10,10,5`` for an option flag, so the pair
    is passed on as ``--grid=-10,10,5,-10,10,5``.
    """
    import re

    args = list(args)
    attached = []
    while args:
        token = args.pop(0)
        if token in _DASHED_VALUES and args and re.match(r'-[\d.]', args[0]):
            token = f'{token}={args.pop(0)}'
        attached.append(token)
    return attached


def parse_args(args=None, namespace=None):
    """Parse args and run further checks on the command line."""

    import logging
    import sys

    from dirac_enclosure.utils.birman_schwinger import MAX_MATRIX_SIZE

    args = sys.argv[1:] if args is None else args
    parser = _build_parser()
    opts = parser.parse_args(_attach_dashed_values(args), namespace)

    if opts.config_file:
        skip = {'execution': ('run_uuid', 'command', 'output_path')}
        try:
            config.load(opts.config_file, skip=skip, init=False)
        except (OSError, ValueError) as e:
            parser.error(f'Cannot load configuration file <{opts.config_file}>: {e}')
        config.loggers.cli.info(f'Loaded previous configuration file {opts.config_file}')

    config.execution.log_level = int(max(25 - 5 * opts.verbose_count, logging.DEBUG))
    config.from_dict(vars(opts))

    command = config.execution.command
    spectral = config.spectral

    if command == 'raster' and 'spectral_point' in vars(opts):
        parser.error('raster takes a --grid, not a --lambda.')
    if command in ('certify', 'bsnorm') and 'grid' in vars(opts):
        parser.error(f'{command} takes a --lambda, not a --grid.')

    if command in ('certify', 'raster', 'bsnorm') and spectral.mass is None:
        parser.error(f'{command} needs the mass (--m).')
    if command in ('certify', 'bsnorm') and spectral.spectral_point is None:
        parser.error(f'{command} needs a spectral point (--lambda RE,IM).')
    if command == 'raster' and spectral.grid is None:
        parser.error('raster needs a lattice (--grid REMIN,REMAX,NRE,IMMIN,IMMAX,NIM).')
    if command in ('certify', 'raster') and spectral.norm3 is None and spectral.potential is None:
        parser.error(f'{command} needs --norm3 (and optionally --norm32) or a --potential.')
    if command == 'bsnorm':
        if spectral.potential is None:
            parser.error('bsnorm needs a scalar --potential.')
        if 4 * spectral.nodes > MAX_MATRIX_SIZE:
            parser.error(f'--nodes {spectral.nodes} exceeds the limit of {MAX_MATRIX_SIZE // 4}.')

    output = config.execution.output_path
    if output is not None and not output.parent.is_dir():
        parser.error(f'The output folder <{output.parent}> does not exist.')

    return opts
