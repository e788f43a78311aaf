"""Plain-text serialization of rasterized regions.

A grid file starts with ``#`` comment lines of the form ``# key: value`` and continues with
one space-separated row per lattice point::

    # command: raster
    # tool: dirac-enclosure 0.1.0
    # m: 5
    # norm3: 0.29999999999999999
    # norm32: none
    # grid: -10,10,201,-10,10,201
    # columns: re im f thm1_lhs thm2_lhs certified
    -10 -10 1.3721... 0.6125... nan 1

Floats carry 17 significant digits, so reading a file back reproduces every value
exactly. Infinities are written as ``inf`` and missing values as ``nan``.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from dirac_enclosure import __version__
from dirac_enclosure.exceptions import ConfigurationError
from dirac_enclosure.utils.enclosure import GRID_COLUMNS, GridSpec, RegionGrid

LGR = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def _format(value):
    return 'none' if value is None else FLOAT_FORMAT % value


def header_lines(region, command='raster', potential=None):
    """The comment header of a grid file, without trailing newlines."""
    lines = [
        f'command: {command}',
        f'tool: dirac-enclosure {__version__}',
        f'm: {_format(region.m)}',
        f'norm3: {_format(region.norm3)}',
        f'norm32: {_format(region.norm32)}',
        f'grid: {region.grid}',
    ]
    if potential:
        lines.append(f'potential: {potential}')
    lines.append(f'columns: {" ".join(GRID_COLUMNS)}')
    return [f'# {line}' for line in lines]


def _write(region, handle, command, potential):
    handle.write('\n'.join(header_lines(region, command, potential)) + '\n')
    table = region.cells.loc[:, list(GRID_COLUMNS)].copy()
    table['certified'] = table['certified'].astype(int)
    table.to_csv(
        handle,
        sep=' ',
        header=False,
        index=False,
        float_format=FLOAT_FORMAT,
        na_rep='nan',
        lineterminator='\n',
    )


def write_grid(region, path_or_buffer, command='raster', potential=None):
    """Write a :class:`~dirac_enclosure.utils.enclosure.RegionGrid` as a grid file.

    Parameters
    ----------
    region : :class:`~dirac_enclosure.utils.enclosure.RegionGrid`
    path_or_buffer : str, os.PathLike or file-like
        Destination. Parent directories are not created.
    command : str
        Recorded in the header.
    potential : str, optional
        Label of the potential the norms came from, recorded in the header.
    """
    if hasattr(path_or_buffer, 'write'):
        _write(region, path_or_buffer, command, potential)
        return path_or_buffer

    path = Path(path_or_buffer)
    with path.open('w', encoding='utf-8', newline='\n') as handle:
        _write(region, handle, command, potential)
    LGR.info('Wrote %d grid rows to <%s>.', len(region), path)
    return path


def read_header(path):
    """Parse the ``# key: value`` lines at the top of a grid file into a dict."""
    header = {}
    with Path(path).open(encoding='utf-8') as handle:
        for line in handle:
            if not line.startswith('#'):
                break
            key, sep, value = line[1:].partition(':')
            if sep:
                header[key.strip()] = value.strip()
    return header


def _optional_float(value):
    return None if value is None or value == 'none' else float(value)


def read_grid(path):
    """Load a grid file written by :func:`write_grid`.

    Returns
    -------
    :class:`~dirac_enclosure.utils.enclosure.RegionGrid`
        The per-criterion verdicts are recomputed from the stored left-hand sides.
    """
    header = read_header(path)
    missing = {'m', 'norm3', 'grid'} - set(header)
    if missing:
        raise ConfigurationError(
            f'<{path}> is not a grid file (missing header keys: {", ".join(sorted(missing))}).'
        )

    table = pd.read_csv(
        path,
        sep=' ',
        comment='#',
        header=None,
        names=list(GRID_COLUMNS),
        float_precision='round_trip',
    )
    grid = GridSpec.from_string(header['grid'])
    if len(table) != grid.size:
        raise ConfigurationError(
            f'<{path}> holds {len(table)} rows but its grid has {grid.size} points.'
        )

    cells = pd.DataFrame(
        {
            're': table['re'].to_numpy(dtype=float),
            'im': table['im'].to_numpy(dtype=float),
            'f': table['f'].to_numpy(dtype=float),
            'thm1_lhs': table['thm1_lhs'].to_numpy(dtype=float),
            'thm2_lhs': table['thm2_lhs'].to_numpy(dtype=float),
        }
    )
    with np.errstate(invalid='ignore'):
        cells['thm1_certified'] = cells['thm1_lhs'] < 1
        cells['thm2_certified'] = cells['thm2_lhs'] < 1
    cells['certified'] = table['certified'].astype(bool).to_numpy()
    return RegionGrid(
        grid=grid,
        m=float(header['m']),
        norm3=float(header['norm3']),
        norm32=_optional_float(header.get('norm32')),
        cells=cells,
    )
