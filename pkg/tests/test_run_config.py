"""Tests for run configuration parsing."""
import json
from pathlib import Path

import pytest

from kgring.config import Config
from kgring.models.run_config import ConfigError, RunConfig, load_run_config, parse_run_config


def test_defaults():
    config = parse_run_config({})
    assert config.is_kratzer
    assert config.dimensions == (3,)
    assert config.n == (0,)
    assert config.output_format == 'csv'
    assert config.coulomb is None
    assert config.setting('scan_points') == Config.SCAN_POINTS


def test_full_configuration():
    config = parse_run_config({
        'potential': {'a0': 0.2, 'r0': 1.5, 'C': 0.3},
        'dimensions': [5, 3, 3],
        'quantum': {'n': '0..2', 'n_tilde': [1, 0], 'm': 1},
        'mode': 'spectrum',
        'output': {'path': 'out.json', 'format': 'json'},
        'tolerances': {'scan_points': 2000.0, 'quad_rtol': 1e-8},
    })
    assert config.dimensions == (3, 5)
    assert config.n == (0, 1, 2)
    assert config.n_tilde == (0, 1)
    assert config.m == (1,)
    assert config.output_path == 'out.json'
    assert config.setting('scan_points') == 2000
    assert isinstance(config.setting('scan_points'), int)
    spec = config.spec_for(5)
    assert spec.D == 5
    assert spec.A == pytest.approx(0.6)
    assert spec.B == pytest.approx(0.45)
    assert spec.C == pytest.approx(0.3)


def test_general_potential():
    config = parse_run_config({'potential': {'A': 1.0, 'B': 0.0}})
    assert not config.is_kratzer
    spec = config.spec_for(4, C=0.2)
    assert spec.A == 1.0
    assert spec.C == 0.2


@pytest.mark.parametrize('data', [
    {'extra': 1},
    {'potential': {'a0': 0.1, 'r0': 1.0, 'A': 1.0}},
    {'potential': {'A': 1.0}},
    {'potential': {'a0': 0.1, 'r0': -1.0}},
    {'potential': {'A': 1.0, 'B': 0.0, 'mu': 0.0}},
    {'potential': {'A': 'one', 'B': 0.0}},
    {'dimensions': [1]},
    {'dimensions': []},
    {'dimensions': [3.5]},
    {'quantum': {'n': '3..1'}},
    {'quantum': {'n': -1}},
    {'quantum': {'l': 0}},
    {'mode': 'plot'},
    {'output': {'format': 'xml'}},
    {'tolerances': {'scan_points': 0}},
    {'tolerances': {'scan_points': 10.5}},
    {'tolerances': {'csv_digits': 4}},
    {'coulomb': {'qe': []}},
    {'coulomb': {'qe': [-1.0]}},
    {'coulomb': {'order': 3}},
    {'scan': {'parameter': 'B', 'values': [1.0]}},
    {'scan': {'parameter': 'qe', 'values': []}},
    {'potential': {'A': 1.0, 'B': 0.0}, 'scan': {'parameter': 'a0', 'values': [0.1]}},
    {'coulomb': {}, 'scan': {'parameter': 'C', 'values': [0.1]}},
    {'wavefn': {'theta': 4.0}},
    {'wavefn': {'points': 0}},
    {'grid': {'n_points': 0}},
    {'oracle': 'yes'},
    [],
])
def test_invalid_configurations(data):
    with pytest.raises(ConfigError):
        parse_run_config(data)


def test_coarse_grid_is_accepted_at_parse_time():
    config = parse_run_config({'grid': {'n_points': 50}})
    assert config.grid.n_points == 50


def test_scan_options():
    config = parse_run_config({'coulomb': {'qe': [0.1, 0.2]}, 'scan': {'parameter': 'D', 'values': [5, 3]}})
    assert config.scan.parameter == 'D'
    assert config.scan.values == (3, 5)
    assert config.coulomb.qe == (0.1, 0.2)


def test_mode_mismatch():
    config = parse_run_config({'mode': 'coulomb'})
    assert config.with_mode('coulomb') is config
    with pytest.raises(ConfigError):
        config.with_mode('spectrum')
    assert RunConfig().with_mode('verify').mode is None


def test_load_run_config(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'potential': {'A': 0.5, 'B': 0.1}, 'dimensions': 4}))
    config = load_run_config(path)
    assert config.dimensions == (4,)
    assert config.potential['A'] == 0.5


def test_load_run_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / 'missing.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"potential": ')
    with pytest.raises(ConfigError):
        load_run_config(broken)


def test_example_configurations_parse():
    configs = sorted((Path(__file__).parent.parent / 'configs').glob('*.json'))
    assert configs
    for path in configs:
        config = load_run_config(path)
        assert config.mode is not None
