"""Tests for dirac_enclosure.utils.gridio."""

import io

import numpy as np
import pytest

from dirac_enclosure import __version__
from dirac_enclosure.exceptions import ConfigurationError
from dirac_enclosure.utils.enclosure import raster
from dirac_enclosure.utils.gridio import header_lines, read_grid, read_header, write_grid


@pytest.fixture
def region():
    return raster('-10,10,41,-10,10,41', 5.0, 0.3, 0.2)


def test_header(region, tmp_path):
    path = write_grid(region, tmp_path / 'region.txt', potential='gaussian(v0=0.1, width=1)')
    lines = path.read_text().splitlines()
    assert lines[0] == '# command: raster'
    assert lines[1] == f'# tool: dirac-enclosure {__version__}'
    assert lines[-1].count(' ') >= 5
    header = read_header(path)
    assert header['m'] == '5'
    assert header['norm3'] == '0.29999999999999999'
    assert header['grid'] == '-10,10,41,-10,10,41'
    assert header['potential'] == 'gaussian(v0=0.1, width=1)'
    assert header['columns'] == 're im f thm1_lhs thm2_lhs certified'


def test_round_trip_is_exact(region, tmp_path):
    path = write_grid(region, tmp_path / 'region.txt')
    loaded = read_grid(path)
    assert len(loaded) == 41 * 41
    assert loaded.m == 5.0
    assert loaded.norm3 == 0.3
    assert loaded.norm32 == 0.2
    assert loaded.grid == region.grid
    for column in ('re', 'im', 'f', 'thm1_lhs', 'thm2_lhs'):
        np.testing.assert_array_equal(loaded.cells[column], region.cells[column])
    np.testing.assert_array_equal(loaded.cells['certified'], region.cells['certified'])
    np.testing.assert_array_equal(
        loaded.cells['thm1_certified'], region.cells['thm1_certified']
    )


def test_infinities_and_missing_values(tmp_path):
    region = raster('-2,2,5,-1,1,3', 1.0, 0.2)
    buffer = io.StringIO()
    write_grid(region, buffer)
    text = buffer.getvalue()
    assert '# norm32: none' in text
    rows = [line.split() for line in text.splitlines() if not line.startswith('#')]
    assert len(rows) == 15
    # the real axis row holds -2 and 2, both on the spectrum
    on_axis = [row for row in rows if float(row[1]) == 0.0 and abs(float(row[0])) == 2.0]
    assert len(on_axis) == 2
    assert all(row[2] == 'inf' and row[3] == 'inf' for row in on_axis)
    assert all(row[4] == 'nan' for row in rows)
    assert {row[5] for row in rows} <= {'0', '1'}

    path = tmp_path / 'region.txt'
    path.write_text(text)
    loaded = read_grid(path)
    assert loaded.norm32 is None
    # |re| >= m on the real axis, so re = -2, -1, 1 and 2
    assert np.isinf(loaded.cells['f']).sum() == 4
    assert loaded.cells['thm2_lhs'].isna().all()
    assert not loaded.cells['thm2_certified'].any()


def test_header_lines_without_potential(region):
    lines = header_lines(region)
    assert not any(line.startswith('# potential:') for line in lines)
    assert lines[-1] == '# columns: re im f thm1_lhs thm2_lhs certified'


def test_read_grid_errors(region, tmp_path):
    path = tmp_path / 'broken.txt'
    path.write_text('# command: raster\n1 2 3 4 5 1\n')
    with pytest.raises(ConfigurationError, match='missing header keys'):
        read_grid(path)

    path = write_grid(region, tmp_path / 'truncated.txt')
    lines = path.read_text().splitlines()
    path.write_text('\n'.join(lines[:-3]) + '\n')
    with pytest.raises(ConfigurationError, match='rows'):
        read_grid(path)
