"""Tests for the command-line interface."""
import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner
from openpyxl import load_workbook

from kgring.main import cli
from kgring.services.tables import SPECTRUM_COLUMNS


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_config(tmp_path):
    def write(data, name='run.json'):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return write


def _rows(path):
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.DictReader(f))


def _strict_json(path):
    def reject(constant):
        raise ValueError(f"Non-standard JSON constant {constant}")
    with open(path, encoding='utf-8') as f:
        return json.load(f, parse_constant=reject)


def test_spectrum_csv(runner, write_config, tmp_path):
    config = write_config({'potential': {'a0': 0.1, 'r0': 1.0}, 'quantum': {'n': '0..1'}})
    out = tmp_path / 'spectrum.csv'
    result = runner.invoke(cli, ['spectrum', '--config', config, '--out', str(out)])
    assert result.exit_code == 0

    header = out.read_text().splitlines()[0]
    assert header.split(',') == SPECTRUM_COLUMNS + ['error']
    rows = _rows(out)
    assert [row['n'] for row in rows] == ['0', '1']
    assert float(rows[0]['E_R']) == pytest.approx(0.98549, abs=1e-5)
    assert float(rows[0]['E_NR']) == pytest.approx(-0.0145898, abs=1e-7)
    assert float(rows[1]['E_R']) > float(rows[0]['E_R'])
    assert all(row['error'] == '' for row in rows)


def test_spectrum_is_deterministic(runner, write_config, tmp_path):
    config = write_config({'potential': {'a0': 0.1, 'r0': 1.0, 'C': 0.2}, 'dimensions': [3, 4],
                           'quantum': {'n': 1, 'n_tilde': '0..1', 'm': [0, 2]}})
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    assert runner.invoke(cli, ['spectrum', '--config', config, '--out', str(first)]).exit_code == 0
    assert runner.invoke(cli, ['spectrum', '--config', config, '--out', str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    rows = _rows(first)
    keys = [(int(r['D']), int(r['n']), int(r['n_tilde']), int(r['m'])) for r in rows]
    assert keys == sorted(keys)
    assert len(keys) == 8


def test_coulomb_rows(runner, write_config, tmp_path):
    config = write_config({'quantum': {'n': '0..1'}, 'coulomb': {'qe': 1.0, 'ell': 0}})
    out = tmp_path / 'coulomb.csv'
    result = runner.invoke(cli, ['coulomb', '--config', config, '--out', str(out)])
    assert result.exit_code == 0
    rows = _rows(out)
    assert rows[0]['E_exact'] == '0.6'
    assert rows[1]['E_exact'] == '0.882352941176471'
    for row in rows:
        assert float(row['root_gap']) < 1e-10


def test_empty_range_is_a_configuration_error(runner, write_config):
    config = write_config({'quantum': {'n': '3..1'}})
    result = runner.invoke(cli, ['spectrum', '--config', config])
    assert result.exit_code == 1


def test_mode_mismatch(runner, write_config):
    config = write_config({'mode': 'coulomb'})
    assert runner.invoke(cli, ['spectrum', '--config', config]).exit_code == 1


def test_scan_needs_scan_block(runner, write_config):
    config = write_config({})
    assert runner.invoke(cli, ['scan', '--config', config]).exit_code == 1


def test_all_rows_failed(runner, write_config, tmp_path):
    config = write_config({'potential': {'A': 1.0, 'B': -1.0}})
    out = tmp_path / 'failed.json'
    result = runner.invoke(cli, ['spectrum', '--config', config, '--out', str(out), '--format', 'json'])
    assert result.exit_code == 2

    payload = _strict_json(out)
    assert payload['columns'][-1] == 'error'
    row = payload['rows'][0]
    assert row['E_R'] is None
    assert row['error'].startswith('InvalidCoupling')


def test_successful_row_has_null_error(runner, write_config, tmp_path):
    config = write_config({'potential': {'a0': 0.1, 'r0': 1.0}, 'dimensions': [3],
                           'quantum': {'n': 0, 'm': 0}})
    out = tmp_path / 'ok.json'
    result = runner.invoke(cli, ['spectrum', '--config', config, '--out', str(out), '--format', 'json'])
    assert result.exit_code == 0
    assert _strict_json(out)['rows'][0]['error'] is None


def test_xlsx_output(runner, write_config, tmp_path):
    config = write_config({'quantum': {'n': '0..2'}})
    out = tmp_path / 'spectrum.xlsx'
    result = runner.invoke(cli, ['spectrum', '--config', config, '--out', str(out), '--format', 'xlsx'])
    assert result.exit_code == 0

    ws = load_workbook(out).active
    assert ws.title == 'results'
    header = [cell.value for cell in ws[1]]
    assert header == SPECTRUM_COLUMNS + ['error']
    assert ws.max_row == 4
    assert ws.cell(row=2, column=header.index('E_R') + 1).value == pytest.approx(0.98549, abs=1e-5)


def test_xlsx_needs_a_path(runner, write_config):
    config = write_config({})
    assert runner.invoke(cli, ['spectrum', '--config', config, '--format', 'xlsx']).exit_code == 1


def test_charge_scan_truncation_order(runner, write_config, tmp_path):
    config = write_config({'scan': {'parameter': 'qe', 'values': [0.1, 0.05, 0.025]},
                           'coulomb': {'order': 2}})
    out = tmp_path / 'scan.csv'
    result = runner.invoke(cli, ['scan', '--config', config, '--out', str(out)])
    assert result.exit_code == 0

    assert out.read_text().splitlines()[0].startswith('qe,')
    rows = _rows(out)
    charges = np.array([float(row['qe']) for row in rows])
    errors = np.array([float(row['series_error']) for row in rows])
    slope = np.polyfit(np.log(charges), np.log(errors), 1)[0]
    assert slope == pytest.approx(6.0, abs=0.5)


def test_dimension_scan_degeneracy(runner, write_config, tmp_path):
    config = write_config({'quantum': {'n': '0..1'}, 'coulomb': {'qe': 1.0, 'ell': 0},
                           'scan': {'parameter': 'D', 'values': [3, 5]}})
    out = tmp_path / 'scan_d.csv'
    result = runner.invoke(cli, ['scan', '--config', config, '--out', str(out)])
    assert result.exit_code == 0

    energies = {(row['D'], row['n']): row['E_exact'] for row in _rows(out)}
    assert energies[('3', '1')] == energies[('5', '0')]
    assert energies[('3', '0')] != energies[('5', '0')]


def test_ring_coupling_scan(runner, write_config, tmp_path):
    config = write_config({'quantum': {'m': 1}, 'scan': {'parameter': 'C', 'values': [0.0, 0.5]}})
    out = tmp_path / 'scan_c.csv'
    assert runner.invoke(cli, ['scan', '--config', config, '--out', str(out)]).exit_code == 0
    rows = _rows(out)
    assert [row['C'] for row in rows] == ['0', '0.5']
    assert float(rows[1]['E_R']) > float(rows[0]['E_R'])


def test_wavefn_rows(runner, write_config, tmp_path):
    config = write_config({'quantum': {'n': 1, 'm': 1}, 'wavefn': {'points': 5, 'theta': 1.0}})
    out = tmp_path / 'wavefn.csv'
    result = runner.invoke(cli, ['wavefn', '--config', config, '--out', str(out)])
    assert result.exit_code == 0

    rows = _rows(out)
    assert len(rows) == 5
    for row in rows:
        expected = (float(row['R']) * float(row['H'])) ** 2 / (2 * np.pi)
        assert float(row['psi_sq']) == pytest.approx(expected, rel=1e-10)


def test_verify_with_coarse_grid(runner, write_config, tmp_path):
    config = write_config({'grid': {'n_points': 50}})
    out = tmp_path / 'report.json'
    result = runner.invoke(cli, ['verify', '--config', config, '--out', str(out)])
    assert result.exit_code == 3

    report = _strict_json(out)
    checks = {check['name']: check for check in report['checks']}
    assert report['summary']['total'] == 13
    assert checks['oracle_convergence']['status'] == 'fail'
    assert 'GridTooCoarse' in checks['oracle_convergence']['detail']
    assert checks['coulomb_exactness']['status'] == 'pass'
    assert 'radial_overlaps' in report['measurements']


def test_unwritable_output_is_a_configuration_error(runner, write_config, tmp_path):
    config = write_config({})
    out = tmp_path / 'missing' / 'spectrum.csv'
    result = runner.invoke(cli, ['spectrum', '--config', config, '--out', str(out)])
    assert result.exit_code == 1
    assert not isinstance(result.exception, OSError)
    assert not out.exists()


def test_unwritable_verify_report(runner, write_config, tmp_path):
    config = write_config({'grid': {'n_points': 50}})
    out = tmp_path / 'missing' / 'report.json'
    result = runner.invoke(cli, ['verify', '--config', config, '--out', str(out)])
    assert result.exit_code == 1
    assert not isinstance(result.exception, OSError)
