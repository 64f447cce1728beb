"""Run configuration: strict parsing of the JSON files the commands read."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from kgring.config import Config
from kgring.models.potential import PotentialSpec, PotentialSpecError
from kgring.utils.ranges import RangeParseError, parse_index_range

MODES = ('spectrum', 'wavefn', 'verify', 'scan', 'coulomb')
FORMATS = ('csv', 'json', 'xlsx')
SCAN_PARAMETERS = ('qe', 'C', 'a0', 'r0', 'mu', 'D')

TOP_LEVEL_KEYS = {
    'potential', 'dimensions', 'quantum', 'mode', 'output', 'tolerances',
    'coulomb', 'scan', 'wavefn', 'grid', 'oracle',
}
KRATZER_KEYS = {'a0', 'r0', 'C', 'mu'}
GENERAL_KEYS = {'A', 'B', 'C', 'mu'}
INTEGER_TOLERANCES = {'scan_points', 'oracle_points', 'oracle_energy_samples', 'angular_points', 'quad_max_evals'}


class ConfigError(ValueError):
    """Invalid run configuration."""
    pass


@dataclass(frozen=True)
class CoulombOptions:
    qe: tuple[float, ...] = (1.0,)
    ell: tuple[int, ...] = (0,)
    order: int = 2


@dataclass(frozen=True)
class ScanOptions:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class WavefnOptions:
    points: int = 50
    extent: float = 20.0  # decay lengths
    theta: float = math.pi / 2
    phi: float = 0.0


@dataclass(frozen=True)
class GridOptions:
    n_points: int | None = None
    extent: float | None = None


@dataclass(frozen=True)
class RunConfig:
    """A validated run configuration."""
    potential: dict = field(default_factory=lambda: {'a0': 0.1, 'r0': 1.0, 'C': 0.0, 'mu': 1.0})
    dimensions: tuple[int, ...] = (3,)
    n: tuple[int, ...] = (0,)
    n_tilde: tuple[int, ...] = (0,)
    m: tuple[int, ...] = (0,)
    mode: str | None = None
    output_path: str | None = None
    output_format: str = 'csv'
    tolerances: dict = field(default_factory=dict)
    coulomb: CoulombOptions | None = None
    scan: ScanOptions | None = None
    wavefn: WavefnOptions = field(default_factory=WavefnOptions)
    grid: GridOptions = field(default_factory=GridOptions)
    oracle: bool = False

    @property
    def is_kratzer(self):
        return 'a0' in self.potential

    @property
    def mu(self):
        return self.potential.get('mu', 1.0)

    def spec_for(self, D, **changes):
        """PotentialSpec at dimension D, with optional parameter overrides."""
        params = dict(self.potential)
        params.update(changes)
        if self.is_kratzer:
            return PotentialSpec.kratzer(params['a0'], params['r0'], params.get('C', 0.0), params.get('mu', 1.0), D)
        return PotentialSpec.general(params['A'], params['B'], params.get('C', 0.0), params.get('mu', 1.0), D)

    def setting(self, key):
        """Tolerance override for `key`, falling back to Config."""
        return self.tolerances.get(key, getattr(Config, key.upper()))

    def with_mode(self, mode):
        """Check the file's mode against the running command."""
        if self.mode is not None and self.mode != mode:
            raise ConfigError(f"Configuration declares mode '{self.mode}' but the command is '{mode}'")
        return self


def load_run_config(path):
    """
    Read and validate a run configuration file.

    Args:
        path: Path to a JSON file

    Returns:
        RunConfig

    Raises:
        ConfigError: Unreadable file, malformed JSON or any schema violation
    """
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"Could not read configuration {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Configuration {path} is not valid JSON: {e}") from e
    return parse_run_config(data)


def parse_run_config(data):
    """Validate a decoded configuration mapping."""
    _require_mapping(data, 'configuration')
    _reject_unknown(data, TOP_LEVEL_KEYS, 'configuration')

    potential = _parse_potential(data.get('potential'))
    dimensions = tuple(_parse_dimensions(data.get('dimensions', [3])))

    quantum = data.get('quantum', {})
    _require_mapping(quantum, 'quantum')
    _reject_unknown(quantum, {'n', 'n_tilde', 'm'}, 'quantum')
    try:
        n = tuple(parse_index_range(quantum.get('n', 0), 'quantum.n'))
        n_tilde = tuple(parse_index_range(quantum.get('n_tilde', 0), 'quantum.n_tilde'))
        m = tuple(parse_index_range(quantum.get('m', 0), 'quantum.m'))
    except RangeParseError as e:
        raise ConfigError(str(e)) from e

    mode = data.get('mode')
    if mode is not None and mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")

    output = data.get('output', {})
    _require_mapping(output, 'output')
    _reject_unknown(output, {'path', 'format'}, 'output')
    output_format = output.get('format', 'csv')
    if output_format not in FORMATS:
        raise ConfigError(f"output.format must be one of {', '.join(FORMATS)}, got {output_format!r}")
    output_path = output.get('path')
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("output.path must be a string")

    scan = _parse_scan(data.get('scan'), potential, coulomb='coulomb' in data)
    oracle = data.get('oracle', False)
    if not isinstance(oracle, bool):
        raise ConfigError("oracle must be true or false")

    return RunConfig(
        potential=potential,
        dimensions=dimensions,
        n=n,
        n_tilde=n_tilde,
        m=m,
        mode=mode,
        output_path=output_path,
        output_format=output_format,
        tolerances=_parse_tolerances(data.get('tolerances', {})),
        coulomb=_parse_coulomb(data.get('coulomb')),
        scan=scan,
        wavefn=_parse_wavefn(data.get('wavefn', {})),
        grid=_parse_grid(data.get('grid', {})),
        oracle=oracle,
    )


def _parse_potential(raw):
    if raw is None:
        return dict(RunConfig().potential)
    _require_mapping(raw, 'potential')
    keys = set(raw)
    if 'a0' in keys or 'r0' in keys:
        _reject_unknown(raw, KRATZER_KEYS, 'potential (Kratzer form)')
        required = ('a0', 'r0')
    else:
        _reject_unknown(raw, GENERAL_KEYS, 'potential (general form)')
        required = ('A', 'B')
    for key in required:
        if key not in raw:
            raise ConfigError(f"potential.{key} is required")
    params = {key: _number(raw[key], f'potential.{key}') for key in raw}
    params.setdefault('C', 0.0)
    params.setdefault('mu', 1.0)
    try:
        if 'a0' in params:
            PotentialSpec.kratzer(params['a0'], params['r0'], params['C'], params['mu'])
        else:
            PotentialSpec.general(params['A'], params['B'], params['C'], params['mu'])
    except PotentialSpecError as e:
        raise ConfigError(f"potential: {e}") from e
    return params


def _parse_dimensions(raw):
    values = raw if isinstance(raw, list) else [raw]
    if not values:
        raise ConfigError("dimensions must not be empty")
    dims = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, int) or value < 2:
            raise ConfigError(f"dimensions must be integers >= 2, got {value!r}")
        dims.append(value)
    return sorted(set(dims))


def _parse_tolerances(raw):
    _require_mapping(raw, 'tolerances')
    _reject_unknown(raw, Config.tolerance_keys(), 'tolerances')
    parsed = {}
    for key, value in raw.items():
        value = _number(value, f'tolerances.{key}')
        if not value > 0:
            raise ConfigError(f"tolerances.{key} must be positive, got {value}")
        if key in INTEGER_TOLERANCES:
            if int(value) != value:
                raise ConfigError(f"tolerances.{key} must be an integer, got {value}")
            value = int(value)
        parsed[key] = value
    return parsed


def _parse_coulomb(raw):
    if raw is None:
        return None
    _require_mapping(raw, 'coulomb')
    _reject_unknown(raw, {'qe', 'ell', 'order'}, 'coulomb')
    qe_raw = raw.get('qe', 1.0)
    qe_values = qe_raw if isinstance(qe_raw, list) else [qe_raw]
    if not qe_values:
        raise ConfigError("coulomb.qe must not be empty")
    qe = tuple(_number(v, 'coulomb.qe') for v in qe_values)
    if any(v <= 0 for v in qe):
        raise ConfigError("coulomb.qe values must be positive")
    try:
        ell = tuple(parse_index_range(raw.get('ell', 0), 'coulomb.ell'))
    except RangeParseError as e:
        raise ConfigError(str(e)) from e
    order = raw.get('order', 2)
    if order not in (0, 1, 2) or isinstance(order, bool):
        raise ConfigError(f"coulomb.order must be 0, 1 or 2, got {order!r}")
    return CoulombOptions(qe=qe, ell=ell, order=order)


def _parse_scan(raw, potential, coulomb=False):
    if raw is None:
        return None
    _require_mapping(raw, 'scan')
    _reject_unknown(raw, {'parameter', 'values'}, 'scan')
    parameter = raw.get('parameter')
    if parameter not in SCAN_PARAMETERS:
        raise ConfigError(f"scan.parameter must be one of {', '.join(SCAN_PARAMETERS)}, got {parameter!r}")
    if parameter in ('a0', 'r0') and 'a0' not in potential:
        raise ConfigError(f"scan.parameter {parameter} needs the Kratzer potential form")
    if coulomb and parameter not in ('qe', 'D', 'mu'):
        raise ConfigError(f"A Coulomb scan sweeps qe, D or mu, not {parameter}")
    values = raw.get('values')
    if not isinstance(values, list) or not values:
        raise ConfigError("scan.values must be a nonempty list")
    if parameter == 'D':
        values = _parse_dimensions(values)
    else:
        values = [_number(v, 'scan.values') for v in values]
    return ScanOptions(parameter=parameter, values=tuple(values))


def _parse_wavefn(raw):
    _require_mapping(raw, 'wavefn')
    _reject_unknown(raw, {'points', 'extent', 'theta', 'phi'}, 'wavefn')
    defaults = WavefnOptions()
    points = raw.get('points', defaults.points)
    if isinstance(points, bool) or not isinstance(points, int) or points < 1:
        raise ConfigError(f"wavefn.points must be a positive integer, got {points!r}")
    extent = _number(raw.get('extent', defaults.extent), 'wavefn.extent')
    if not extent > 0:
        raise ConfigError("wavefn.extent must be positive")
    theta = _number(raw.get('theta', defaults.theta), 'wavefn.theta')
    if not 0 < theta < math.pi:
        raise ConfigError("wavefn.theta must lie in (0, pi)")
    phi = _number(raw.get('phi', defaults.phi), 'wavefn.phi')
    return WavefnOptions(points=points, extent=extent, theta=theta, phi=phi)


def _parse_grid(raw):
    _require_mapping(raw, 'grid')
    _reject_unknown(raw, {'n_points', 'extent'}, 'grid')
    n_points = raw.get('n_points')
    if n_points is not None and (isinstance(n_points, bool) or not isinstance(n_points, int) or n_points < 1):
        raise ConfigError(f"grid.n_points must be a positive integer, got {n_points!r}")
    extent = raw.get('extent')
    if extent is not None:
        extent = _number(extent, 'grid.extent')
        if not extent > 0:
            raise ConfigError("grid.extent must be positive")
    return GridOptions(n_points=n_points, extent=extent)


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")
    return float(value) if isinstance(value, float) else value


def _require_mapping(value, name):
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a JSON object")


def _reject_unknown(mapping, allowed, name):
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"Unknown key(s) in {name}: {', '.join(unknown)}")
