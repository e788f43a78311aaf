"""Tests for the command line."""

import sys
from unittest.mock import patch

import pytest

from dirac_enclosure.cli import run
from dirac_enclosure.cli.parser import _build_parser
from dirac_enclosure.utils.gridio import read_grid


def _run(*args):
    """Run the command line and return its exit status."""
    with patch.object(sys, 'argv', ['dirac-enclosure', *args]):
        with pytest.raises(SystemExit) as excinfo:
            run.main()
    return excinfo.value.code


def test_parser_help():
    text = _build_parser().format_help()
    for option in ('--lambda', '--grid', '--norm32', '--potential', '--nodes', '--out'):
        assert option in text


def test_certify(clean_config, capsys):
    assert _run('certify', '--lambda', '0,2', '--m', '1', '--norm3', '0.5') == 0
    out = capsys.readouterr().out
    assert 'certified = true' in out
    assert 'declared' in out


def test_certify_from_potential(clean_config, capsys):
    args = ('certify', '--lambda', '0.5,1', '--m', '1', '--potential', 'gaussian:v0=0.1')
    assert _run(*args) == 0
    assert 'quadrature' in capsys.readouterr().out


def test_not_certified_on_the_spectrum(clean_config, capsys):
    assert _run('certify', '--lambda', '1,0', '--m', '1', '--norm3', '0.3') == 3
    assert 'f infinite on essential spectrum' in capsys.readouterr().out


def test_spectrum_certified_by_the_second_criterion(clean_config, capsys):
    args = ('certify', '--lambda', '1,0', '--m', '1', '--norm3', '0.3', '--norm32', '0.1')
    assert _run(*args) == 0


@pytest.mark.parametrize(
    'args',
    [
        ('certify', '--lambda', '0,2', '--norm3', '0.5'),
        ('certify', '--m', '1', '--norm3', '0.5'),
        ('certify', '--lambda', '0,2', '--m', '1'),
        ('certify', '--lambda', '0;2', '--m', '1', '--norm3', '0.5'),
        ('certify', '--lambda', '0,2', '--m', '-1', '--norm3', '0.5'),
        ('raster', '--lambda', '0,2', '--m', '1', '--norm3', '0.5'),
        ('raster', '--grid', '-1,1,1,-1,1,3', '--m', '1', '--norm3', '0.5'),
        ('certify', '--lambda', '0,2', '--m', '1', '--potential', 'yukawa:1'),
        ('bsnorm', '--lambda', '0,2', '--m', '1', '--norm3', '0.5'),
        ('certify', '--lambda', '0,2', '--m', '1', '--norm3', '0.5', '--tol', '0.5'),
    ],
)
def test_usage_errors(clean_config, args):
    assert _run(*args) == 2


def test_missing_output_folder(clean_config, tmp_path):
    out = tmp_path / 'missing' / 'region.txt'
    args = ('raster', '--grid', '-1,1,3,-1,1,3', '--m', '1', '--norm3', '0.1', '--out', str(out))
    assert _run(*args) == 2


def test_negative_grid_bounds_in_their_own_token(clean_config, tmp_path):
    out = tmp_path / 'square.txt'
    args = ('raster', '--grid', '-10,10,5,-10,10,5', '--m', '5', '--norm3', '0.3')
    assert _run(*args, '--out', str(out)) == 0
    assert len(read_grid(out)) == 25


def test_negative_real_part_in_its_own_token(clean_config, capsys):
    assert _run('certify', '--lambda', '-0.5,1', '--m', '1', '--norm3', '0.3') == 0
    assert 'certified = true' in capsys.readouterr().out


def test_bsnorm_on_the_spectrum(clean_config, caplog):
    args = ('bsnorm', '--lambda', '3,0', '--m', '1', '--potential', 'gaussian:v0=0.1')
    assert _run(*args, '--nodes', '8') == 2
    assert 'spectrum' in caplog.text


def test_unwritable_output(clean_config, tmp_path, caplog):
    # a directory passes the folder check but cannot be written as a file
    out = tmp_path / 'taken'
    out.mkdir()
    args = ('certify', '--lambda', '0,2', '--m', '1', '--norm3', '0.5', '--out', str(out))
    assert _run(*args) == 2
    assert 'could not write' in caplog.text
    assert not (tmp_path / 'taken_config.toml').exists()


def test_raster_to_file(clean_config, tmp_path):
    out = tmp_path / 'region.txt'
    args = (
        'raster',
        '--grid',
        '-4,4,9,-2,2,5',
        '--m',
        '2',
        '--norm3',
        '0.3',
        '--norm32',
        '0.2',
        '--out',
        str(out),
    )
    assert _run(*args) == 0
    region = read_grid(out)
    assert len(region) == 45
    assert region.m == 2.0
    assert region.norm32 == 0.2
    assert (tmp_path / 'region_config.toml').is_file()

    # the saved settings reproduce the grid file
    again = tmp_path / 'again.txt'
    args = ('raster', '--config-file', str(tmp_path / 'region_config.toml'), '--out', str(again))
    assert _run(*args) == 0
    assert again.read_text() == out.read_text()


def test_raster_to_stdout(clean_config, capsys):
    assert _run('raster', '--grid', '-1,1,3,-1,1,3', '--m', '0', '--norm3', '0.1') == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == '# command: raster'
    assert len([line for line in lines if not line.startswith('#')]) == 9


def test_bsnorm(clean_config, capsys):
    args = (
        'bsnorm',
        '--lambda',
        '0,2',
        '--m',
        '1',
        '--potential',
        'gaussian:v0=0.1',
        '--nodes',
        '27',
        '--seed',
        '3',
    )
    assert _run(*args) == 0
    out = capsys.readouterr().out
    assert 'below_lemma1_bound = true' in out
    assert 'node_count = 27' in out
    assert 'seed = 3' in out


def test_bsnorm_report_file(clean_config, tmp_path):
    out = tmp_path / 'bs.toml'
    args = (
        'bsnorm',
        '--lambda',
        '0.5,1',
        '--m',
        '0',
        '--potential',
        'gaussian:v0=0.2,width=0.5',
        '--nodes',
        '8',
        '--scheme',
        'tensor_gauss',
        '--seed',
        '1',
        '--out',
        str(out),
    )
    assert _run(*args) == 0
    assert 'tensor_gauss' in out.read_text()
    assert (tmp_path / 'bs_config.toml').is_file()


def test_check(clean_config, capsys):
    assert _run('check', '--seed', '0') == 0
    out = capsys.readouterr().out
    assert 'passed = true' in out
    assert 'passed = false' not in out


def test_free_operator_is_certified(clean_config):
    assert _run('certify', '--lambda', '3,0.1', '--m', '1', '--norm3', '0') == 0


def test_bsnorm_zero_potential(clean_config, capsys):
    args = ('bsnorm', '--lambda', '0,2', '--m', '1', '--potential', 'gaussian:v0=0')
    args += ('--nodes', '8')
    assert _run(*args) == 0
    out = capsys.readouterr().out
    assert 'estimate = 0.0' in out
    assert 'lemma1_bound = 0.0' in out
    assert 'lemma2_bound = 0.0' in out
