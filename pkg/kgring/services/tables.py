"""Row builders for the spectrum, coulomb, scan and wavefn tables."""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field

import numpy as np

from kgring.models.potential import PotentialSpec, PotentialSpecError, QuantumNumbers
from kgring.models.run_config import CoulombOptions
from kgring.services import oracle, spectrum, wavefn
from kgring.services.special_fn import NonConvergent, ParameterOutOfRange

logger = logging.getLogger(__name__)

# Failures recorded in a row's error column instead of aborting the run
ROW_ERRORS = (
    spectrum.SpectrumError,
    oracle.GridTooCoarse,
    PotentialSpecError,
    ParameterOutOfRange,
    NonConvergent,
)

SPECTRUM_COLUMNS = [
    'D', 'n', 'n_tilde', 'm', 'E_R', 'E_R_roots', 'E_NR', 'j', 'j_prime', 'm_prime',
    'ell_prime', 'zeta', 'residual_R', 'residual_NR',
]
ORACLE_COLUMNS = ['E_R_fd', 'E_NR_fd', 'oracle_gap_R', 'oracle_gap_NR']
COULOMB_COLUMNS = [
    'D', 'n', 'ell', 'qe', 'E_exact', 'E_series', 'order', 'series_error', 'E_root', 'root_gap',
]
WAVEFN_COLUMNS = ['D', 'n', 'n_tilde', 'm', 'E_R', 'r', 'R', 'H', 'psi_re', 'psi_im', 'psi_sq']


@dataclass
class Table:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)

    @property
    def failed_rows(self):
        return sum(1 for row in self.rows if row.get('error'))

    @property
    def all_failed(self):
        return bool(self.rows) and self.failed_rows == len(self.rows)


def spectrum_table(config):
    """
    One row per (D, n, n_tilde, m) in lexicographic order.

    Args:
        config: RunConfig

    Returns:
        Table of relativistic roots, the nonrelativistic level, derived
        quantum numbers and residuals; oracle columns when config.oracle
    """
    columns = SPECTRUM_COLUMNS + (ORACLE_COLUMNS if config.oracle else []) + ['error']
    rows = []
    for D in config.dimensions:
        for q in _quantum_numbers(config):
            rows.append(_spectrum_row(config, lambda: config.spec_for(D), D, q))
    return Table(columns=columns, rows=rows)


def coulomb_table(config, options=None, dimensions=None):
    """Closed form, series and root-solve levels of the pure Coulomb tail (A = qe, B = 0)."""
    options = options or config.coulomb or CoulombOptions()
    rows = []
    for D in dimensions or config.dimensions:
        for n in config.n:
            for ell in options.ell:
                for qe in options.qe:
                    rows.append(_coulomb_row(config, options, D, n, ell, qe))
    return Table(columns=COULOMB_COLUMNS + ['error'], rows=rows)


def scan_table(config):
    """
    Sweep one parameter; the swept parameter is the first column.

    A sweep of qe, or any sweep with a `coulomb` block, produces Coulomb
    rows; everything else produces spectrum rows.
    """
    scan = config.scan
    parameter = scan.parameter
    coulomb_rows = parameter == 'qe' or config.coulomb is not None

    if coulomb_rows:
        options = config.coulomb or CoulombOptions()
        if parameter == 'qe':
            table = coulomb_table(config, CoulombOptions(qe=scan.values, ell=options.ell, order=options.order))
            # qe already has a column; move it to the front
            table.columns = ['qe'] + [c for c in table.columns if c != 'qe']
            return table
        if parameter == 'D':
            return coulomb_table(config, options, dimensions=scan.values)
        # parse_run_config only admits qe, D and mu for Coulomb sweeps
        table = Table(columns=['mu'] + COULOMB_COLUMNS + ['error'])
        for value in scan.values:
            swept = _with_potential(config, mu=value)
            for row in coulomb_table(swept, options).rows:
                table.rows.append({'mu': value, **row})
        return table

    columns = SPECTRUM_COLUMNS + (ORACLE_COLUMNS if config.oracle else []) + ['error']
    if parameter == 'D':
        table = Table(columns=columns)
        for D in scan.values:
            for q in _quantum_numbers(config):
                table.rows.append(_spectrum_row(config, lambda: config.spec_for(D), D, q))
        return table

    table = Table(columns=[parameter] + columns)
    for value in scan.values:
        for D in config.dimensions:
            for q in _quantum_numbers(config):
                row = _spectrum_row(config, lambda: config.spec_for(D, **{parameter: value}), D, q)
                table.rows.append({parameter: value, **row})
    return table


def wavefn_table(config):
    """
    Sampled R(r), H(theta) and psi(r, theta, phi) for each state.

    r runs over `points` equally spaced radii up to `extent` decay lengths;
    theta and phi are fixed by the wavefn block.
    """
    options = config.wavefn
    rows = []
    for D in config.dimensions:
        for q in _quantum_numbers(config):
            base = {'D': D, 'n': q.n, 'n_tilde': q.n_tilde, 'm': q.m}
            try:
                spec = config.spec_for(D)
                level = _solve_relativistic(config, spec, q)[0]
                derived = spectrum.derived_numbers(spec, q, level)
                r_state = wavefn.radial_state(spec, level, q.n, derived.j)
                a_state = wavefn.angular_state(q.n_tilde, q.m, spec.C, derived.alpha2_sq)
            except ROW_ERRORS as e:
                rows.append({**base, 'error': _describe(e)})
                continue

            r = options.extent / r_state.epsilon * np.arange(1, options.points + 1) / options.points
            radial_values = wavefn.radial(r_state, r)
            polar_value = wavefn.angular(a_state, options.theta)
            psi = wavefn.total(r_state, a_state, q.m, r, options.theta, options.phi)
            for i in range(options.points):
                rows.append({
                    **base,
                    'E_R': level.value,
                    'r': float(r[i]),
                    'R': float(radial_values[i]),
                    'H': polar_value,
                    'psi_re': float(psi[i].real),
                    'psi_im': float(psi[i].imag),
                    'psi_sq': float(abs(psi[i]) ** 2),
                })
    return Table(columns=WAVEFN_COLUMNS + ['error'], rows=rows)


def oracle_grid(config, spec, n, j):
    """Radial oracle grid sized from the decay estimate, with the config's grid overrides."""
    return oracle.GridSpec.for_decay(
        oracle.estimate_decay_rate(spec, n, j),
        n_points=config.grid.n_points or config.setting('oracle_points'),
        extent=config.grid.extent or config.setting('oracle_extent'),
    )


def _spectrum_row(config, build_spec, D, q):
    row = {'D': D, 'n': q.n, 'n_tilde': q.n_tilde, 'm': q.m}
    try:
        spec = build_spec()
        level = _solve_relativistic(config, spec, q)[0]
        derived = spectrum.derived_numbers(spec, q, level)
        nonrel = spectrum.nonrel_energy(spec, q)
        row.update({
            'E_R': level.value,
            'E_R_roots': list(level.candidates),
            'E_NR': nonrel.value,
            'j': derived.j,
            'j_prime': derived.j_prime,
            'm_prime': derived.m_prime,
            'ell_prime': derived.ell_prime,
            'zeta': derived.zeta,
            'residual_R': level.residual,
            'residual_NR': nonrel.residual,
        })
        if config.oracle:
            row.update(_oracle_columns(config, spec, q, level, nonrel, derived))
    except ROW_ERRORS as e:
        logger.info("Row D=%s %s failed: %s", D, q, e)
        row['error'] = _describe(e)
    return row


def _oracle_columns(config, spec, q, level, nonrel, derived):
    refinement_tol = config.setting('oracle_refinement_tol')
    energy_samples = config.setting('oracle_energy_samples')
    if spec.C > 0:
        fd_rel = oracle.fd_noncentral_eigen(
            spec, q,
            grid=oracle_grid(config, spec, q.n, 0.0),
            angular_grid=oracle.GridSpec.polar_grid(config.setting('angular_points')),
            refinement_tol=refinement_tol, energy_samples=energy_samples,
        )
    else:
        fd_rel = oracle.fd_radial_eigen(spec, derived.j, True, q.n, oracle_grid(config, spec, q.n, derived.j),
                                        refinement_tol, energy_samples)
    j_nr = spectrum.angular_j(q.n_tilde, q.m, spec.C, 2.0 * spec.mu, spec.D).j
    fd_nr = oracle.fd_radial_eigen(spec, j_nr, False, q.n, oracle_grid(config, spec, q.n, j_nr), refinement_tol)
    return {
        'E_R_fd': fd_rel.value,
        'E_NR_fd': fd_nr.value,
        'oracle_gap_R': abs(fd_rel.value - level.value),
        'oracle_gap_NR': abs(fd_nr.value - nonrel.value),
    }


def _coulomb_row(config, options, D, n, ell, qe):
    row = {'D': D, 'n': n, 'ell': ell, 'qe': qe, 'order': options.order}
    try:
        spec = PotentialSpec.general(A=qe, B=0.0, mu=config.mu, D=D)
        exact = spectrum.coulomb_energy(qe, spec, n, ell)
        series = spectrum.coulomb_series(qe, spec, n, ell, options.order)
        root = spectrum.solve_radial_relativistic(
            spec, n, ell,
            scan_points=config.setting('scan_points'),
            guard=config.setting('endpoint_guard'),
            residual_tol=config.setting('root_residual'),
        )[0]
        row.update({
            'E_exact': exact.value,
            'E_series': series.value,
            'series_error': series.residual,
            'E_root': root.value,
            'root_gap': abs(root.value - exact.value),
        })
    except ROW_ERRORS as e:
        row['error'] = _describe(e)
    return row


def _solve_relativistic(config, spec, q):
    return spectrum.solve_noncentral_relativistic(
        spec, q,
        scan_points=config.setting('scan_points'),
        guard=config.setting('endpoint_guard'),
        residual_tol=config.setting('root_residual'),
    )


def _quantum_numbers(config):
    return [QuantumNumbers(n, n_tilde, m) for n in config.n for n_tilde in config.n_tilde for m in config.m]


def _with_potential(config, **changes):
    return dataclasses.replace(config, potential={**config.potential, **changes})


def _describe(error):
    return f"{type(error).__name__}: {error}"
