"""
The verify suite: named checks of the solvers against regressions, the
finite-difference oracle and normalization quadratures.

Every check returns a CheckResult; an exception inside a check fails it
with the exception recorded in `detail`.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from kgring.models.potential import PotentialSpec, QuantumNumbers
from kgring.services import nu_engine, oracle, spectrum, wavefn
from kgring.services.tables import oracle_grid

logger = logging.getLogger(__name__)

# Relativistic oracle cases: (label, spec, quantum numbers)
RELATIVISTIC_CASES = [
    ('kratzer_ground', PotentialSpec.kratzer(0.1, 1.0), QuantumNumbers(0, 0, 0)),
    ('kratzer_excited', PotentialSpec.kratzer(0.1, 1.0), QuantumNumbers(1, 0, 0)),
    ('kratzer_d4', PotentialSpec.kratzer(0.2, 1.5, D=4), QuantumNumbers(0, 1, 1)),
    ('general_d5', PotentialSpec.general(0.5, 0.05, D=5), QuantumNumbers(0, 0, 0)),
    ('ring_d3', PotentialSpec.kratzer(0.1, 1.0, C=0.3), QuantumNumbers(0, 1, 1)),
    ('ring_d4', PotentialSpec.kratzer(0.15, 1.0, C=0.5, D=4), QuantumNumbers(0, 0, 1)),
]

NONRELATIVISTIC_CASES = [
    ('kratzer_ground', PotentialSpec.kratzer(0.1, 1.0), QuantumNumbers(0, 0, 0)),
    ('kratzer_excited', PotentialSpec.kratzer(0.1, 1.0), QuantumNumbers(1, 0, 0)),
    ('ring_d3', PotentialSpec.kratzer(0.1, 1.0, C=0.2), QuantumNumbers(0, 1, 1)),
    ('general_d4', PotentialSpec.general(0.5, 0.1, D=4), QuantumNumbers(0, 0, 0)),
]

NORMALIZATION_SPECS = [
    PotentialSpec.kratzer(0.1, 1.0, C=0.3),
    PotentialSpec.general(0.8, 0.05, C=0.1, D=4),
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float | None
    tolerance: float | None
    detail: str = ''

    def as_dict(self):
        return {
            'name': self.name,
            'status': 'pass' if self.passed else 'fail',
            'measured': self.measured,
            'tolerance': self.tolerance,
            'detail': self.detail,
        }


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    measurements: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]

    def as_dict(self):
        return {
            'checks': [check.as_dict() for check in self.checks],
            'measurements': self.measurements,
            'summary': {
                'total': len(self.checks),
                'passed': len(self.checks) - len(self.failures),
                'failed': len(self.failures),
            },
        }

    def summary_lines(self):
        lines = []
        for check in self.checks:
            status = 'PASS' if check.passed else 'FAIL'
            lines.append(f"{status}  {check.name}  measured={check.measured}  tolerance={check.tolerance}")
            if check.detail and not check.passed:
                lines.append(f"      {check.detail}")
        lines.append(f"{len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed")
        return lines


def run_checks(config):
    """
    Run every named check.

    Args:
        config: RunConfig; its grid block and tolerances steer the oracle checks

    Returns:
        VerificationReport with checks in a fixed order
    """
    report = VerificationReport()
    for name, check in CHECKS:
        logger.info("Running check %s", name)
        try:
            result = check(config)
        except Exception as e:  # noqa: BLE001 - a crashing check is a failing check
            logger.warning("Check %s raised %s", name, e)
            result = CheckResult(name, False, None, None, f"{type(e).__name__}: {e}")
        report.checks.append(result)
    try:
        report.measurements['radial_overlaps'] = radial_overlaps(config)
    except Exception as e:  # noqa: BLE001
        report.measurements['radial_overlaps'] = {'error': f"{type(e).__name__}: {e}"}
    return report


def check_nu_angular(config):
    """Polar coefficient triple: k = nu' - m'^2, pi = -m' s, tau = -2(1+m') s and both lambda forms."""
    m_prime, n_tilde = 1.3, 2
    nu_prime = (n_tilde + m_prime) * (n_tilde + m_prime + 1)
    problem = nu_engine.angular_problem(m_prime, nu_prime)
    candidates = nu_engine.pi_candidates(problem)
    solution = nu_engine.select_branch(candidates, problem)

    expected_branches = sorted([
        (nu_prime - m_prime ** 2, 0.0, m_prime), (nu_prime - m_prime ** 2, 0.0, -m_prime),
        (nu_prime, m_prime, 0.0), (nu_prime, -m_prime, 0.0),
    ])
    found_branches = sorted((c.k, c.pi[0], c.pi[1]) for c in candidates)
    deviations = [len(found_branches) != 4]
    deviations += [abs(a - b) for f, e in zip(found_branches, expected_branches) for a, b in zip(f, e)]
    deviations += [
        abs(solution.k - (nu_prime - m_prime ** 2)),
        abs(solution.pi[0]), abs(solution.pi[1] + m_prime),
        abs(solution.tau[0]), abs(solution.tau[1] + 2 * (1 + m_prime)),
        abs(nu_engine.lambda_n(solution, problem, n_tilde) - (2 * n_tilde * (1 + m_prime) + n_tilde * (n_tilde - 1))),
        abs(nu_engine.lambda_from_k(solution) - nu_engine.lambda_n(solution, problem, n_tilde)),
    ]
    measured = float(max(deviations))
    return CheckResult('nu_angular_regression', measured <= 1e-12, measured, 1e-12)


def check_nu_radial(config):
    """Radial triple: k = beta^2 - eps sqrt(4 gamma^2 + 1), tau' = -2 eps, lambda_n = 2 n eps."""
    deviations = []
    for epsilon, beta_sq, gamma_sq in ((1.0, 3.0, 2.0), (0.7, 1.9, 0.8), (0.17, 0.4, 0.25)):
        problem = nu_engine.radial_problem(epsilon, beta_sq, gamma_sq)
        solution = nu_engine.solve(problem)
        root = math.sqrt(4 * gamma_sq + 1)
        deviations += [
            abs(solution.k - (beta_sq - epsilon * root)),
            abs(solution.pi[0] - 0.5 * (1 + root)), abs(solution.pi[1] + epsilon),
            abs(solution.tau[0] - (1 + root)), abs(solution.tau_slope + 2 * epsilon),
        ]
        deviations += [abs(nu_engine.lambda_n(solution, problem, n) - 2 * n * epsilon) for n in range(4)]
    measured = float(max(deviations))
    return CheckResult('nu_radial_regression', measured <= 1e-12, measured, 1e-12)


def check_coulomb(config):
    """Root solves with A = qe, B = 0 against the closed form, plus E = 0.6 at qe = 1."""
    worst = 0.0
    for qe in (0.5, 1.0):
        for D in (3, 4, 5):
            spec = PotentialSpec.general(qe, 0.0, D=D)
            for n in range(3):
                for ell in range(3):
                    exact = spectrum.coulomb_energy(qe, spec, n, ell).value
                    root = spectrum.solve_radial_relativistic(spec, n, ell, scan_points=config.setting('scan_points'))[0]
                    worst = max(worst, abs(root.value - exact))
    anchor = spectrum.coulomb_energy(1.0, PotentialSpec.general(1.0, 0.0), 0, 0).value
    worst = max(worst, abs(anchor - 0.6))
    return CheckResult('coulomb_exactness', worst <= 1e-10, worst, 1e-10)


def check_series_order(config):
    """Log-log slope of the second-order series error in qe."""
    charges = np.array([0.1, 0.05, 0.025])
    spec = PotentialSpec.general(1.0, 0.0)
    errors = np.array([spectrum.coulomb_series(qe, spec, 0, 0, order=2).residual for qe in charges])
    slope = float(np.polyfit(np.log(charges), np.log(errors), 1)[0])
    return CheckResult('series_order', abs(slope - 6.0) <= 0.5, slope, 0.5, 'expected slope 6')


def check_oracle_relativistic(config):
    """Self-consistent finite-difference levels against the root solves."""
    worst = 0.0
    gaps = []
    multiple = []
    for label, spec, q in RELATIVISTIC_CASES:
        level = spectrum.solve_noncentral_relativistic(spec, q)[0]
        if spec.C > 0:
            fd = oracle.fd_noncentral_eigen(
                spec, q, grid=oracle_grid(config, spec, q.n, 0.0),
                angular_grid=oracle.GridSpec.polar_grid(config.setting('angular_points')),
                refinement_tol=config.setting('oracle_refinement_tol'),
                energy_samples=config.setting('oracle_energy_samples'),
            )
            allowed = 1e-3 * abs(level.value - spec.mu)
        else:
            j = spectrum.derived_numbers(spec, q, level).j
            fd = oracle.fd_radial_eigen(spec, j, True, q.n, oracle_grid(config, spec, q.n, j),
                                        config.setting('oracle_refinement_tol'),
                                        config.setting('oracle_energy_samples'))
            allowed = 1e-4 * spec.mu
        gap = abs(fd.value - level.value)
        gaps.append(f"{label}={gap:.3g}")
        worst = max(worst, gap / allowed)
        # Lambda_n(E) - (E^2 - mu^2) must change sign exactly once
        if len(fd.candidates) != 1:
            multiple.append(f"{label} has {len(fd.candidates)} self-consistent roots")
    detail = 'gap / allowed; ' + ', '.join(gaps + multiple)
    return CheckResult('oracle_relativistic', worst <= 1.0 and not multiple, worst, 1.0, detail)


def check_oracle_nonrelativistic(config):
    """Closed nonrelativistic levels against the linear finite-difference eigensolver."""
    worst = 0.0
    gaps = []
    for label, spec, q in NONRELATIVISTIC_CASES:
        closed = spectrum.nonrel_energy(spec, q).value
        j = spectrum.angular_j(q.n_tilde, q.m, spec.C, 2.0 * spec.mu, spec.D).j
        fd = oracle.fd_radial_eigen(spec, j, False, q.n, oracle_grid(config, spec, q.n, j),
                                    config.setting('oracle_refinement_tol'))
        gap = abs(fd.value - closed)
        gaps.append(f"{label}={gap:.3g}")
        worst = max(worst, gap)
    return CheckResult('oracle_nonrelativistic', worst <= 1e-5, worst, 1e-5, ', '.join(gaps))


def check_oracle_angular(config):
    """Finite-volume polar separation constants against Legendre values and angular_j."""
    grid = oracle.GridSpec.polar_grid(config.setting('angular_points'))
    deviations = [
        abs(oracle.fd_angular_eigen(0, 0.0, 3, 0, grid)),
        abs(oracle.fd_angular_eigen(0, 0.0, 3, 1, grid) - 2.0) / 2.0,
    ]
    j = spectrum.angular_j(1, 1, 0.5, 1.0, 4).j
    expected = j * (j + 2)
    deviations.append(abs(oracle.fd_angular_eigen(1, 0.5, 4, 1, grid) - expected) / expected)
    measured = float(max(deviations))
    return CheckResult('oracle_angular', measured <= 1e-4, measured, 1e-4)


def check_oracle_convergence(config):
    """Observed order of the single-grid relativistic eigenvalue for the Coulomb ground state."""
    spec = PotentialSpec.general(1.0, 0.0)
    grid = oracle_grid(config, spec, 0, 0.0)
    spacings, values = [], []
    for _ in range(4):
        values.append(oracle.radial_eigen_on_grid(spec, 0.0, True, 0, grid,
                                                  config.setting('oracle_energy_samples')).value)
        spacings.append(grid.h)
        grid = grid.refined()
    differences = np.abs(np.diff(values))
    order = float(np.polyfit(np.log(spacings[:-1]), np.log(differences), 1)[0])
    return CheckResult('oracle_convergence', abs(order - 2.0) <= 0.3, order, 0.3,
                       f"values {values}")


def check_nonrel_limit(config):
    """Relative gap between E_R - mu and E_NR shrinks as a0 decreases."""
    gaps = []
    q = QuantumNumbers(0, 0, 0)
    for a0 in (0.1, 0.05, 0.025):
        spec = PotentialSpec.kratzer(a0, 1.0)
        level = spectrum.solve_noncentral_relativistic(spec, q)[0]
        gaps.append(spectrum.nonrel_limit_map(level, spec, q).relative_gap)
    monotone = all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
    return CheckResult('nonrel_limit', monotone and gaps[0] < 0.02, gaps[0], 0.02,
                       f"relative gaps {gaps}")


def check_normalization(config):
    """Radial, polar, azimuthal and total norms for n, n_tilde <= 3 and m <= 1."""
    worst = 0.0
    for spec in NORMALIZATION_SPECS:
        for n in range(4):
            for n_tilde in range(4):
                for m in range(2):
                    q = QuantumNumbers(n, n_tilde, m)
                    level = spectrum.solve_noncentral_relativistic(spec, q)[0]
                    derived = spectrum.derived_numbers(spec, q, level)
                    r_state = wavefn.radial_state(spec, level, n, derived.j)
                    a_state = wavefn.angular_state(n_tilde, m, spec.C, derived.alpha2_sq)
                    norms = (
                        wavefn.radial_norm(r_state).value,
                        wavefn.angular_norm(a_state).value,
                        wavefn.azimuthal_norm(m).value,
                        wavefn.total_norm(r_state, a_state, m),
                    )
                    worst = max(worst, max(abs(value - 1.0) for value in norms))
    return CheckResult('normalization', worst <= 1e-7, worst, 1e-7)


def check_ode_residuals(config):
    """Closed-form eigenfunctions in their ODEs, plus a perturbed control that must fail."""
    residuals = {}

    coulomb = PotentialSpec.general(1.0, 0.0)
    ground = spectrum.coulomb_energy(1.0, coulomb, 0, 0)
    coulomb_state = wavefn.radial_state(coulomb, ground, 0, 0.0)
    coulomb_params = oracle.ResidualParams(coulomb, ground.value, 0.0)
    residuals['coulomb_radial'] = oracle.residual(
        oracle.OdeId.RADIAL_REL, lambda r: wavefn.radial(coulomb_state, r), coulomb_params)

    ring = PotentialSpec.kratzer(0.1, 1.0, C=0.3)
    q = QuantumNumbers(1, 1, 1)
    level = spectrum.solve_noncentral_relativistic(ring, q)[0]
    derived = spectrum.derived_numbers(ring, q, level)
    r_state = wavefn.radial_state(ring, level, q.n, derived.j)
    a_state = wavefn.angular_state(q.n_tilde, q.m, ring.C, derived.alpha2_sq)
    params = oracle.ResidualParams(ring, level.value, derived.j, m=q.m)
    residuals['ring_radial'] = oracle.residual(oracle.OdeId.RADIAL_REL, lambda r: wavefn.radial(r_state, r), params)
    residuals['ring_polar'] = oracle.residual(oracle.OdeId.POLAR_REL, lambda t: wavefn.angular(a_state, t), params)

    nonrel = spectrum.nonrel_energy(ring, q)
    j_nr = spectrum.angular_j(q.n_tilde, q.m, ring.C, 2.0 * ring.mu, ring.D).j
    nr_state = wavefn.radial_state(ring, nonrel, q.n, j_nr)
    residuals['ring_radial_nr'] = oracle.residual(
        oracle.OdeId.RADIAL_NR, lambda r: wavefn.radial(nr_state, r),
        oracle.ResidualParams(ring, nonrel.value, j_nr))

    control = oracle.residual(oracle.OdeId.RADIAL_REL, perturbed_sampler(coulomb_state), coulomb_params)
    measured = float(max(residuals.values()))
    detail = ', '.join(f"{k}={v:.3g}" for k, v in residuals.items()) + f"; perturbed control={control:.3g}"
    return CheckResult('ode_residuals', measured < 1e-6 and control > 1e-3, measured, 1e-6, detail)


def perturbed_sampler(state, amplitude=0.01):
    """Radial function with a Gaussian bump of relative size `amplitude` at one decay length."""
    center = 1.0 / state.epsilon
    width = 0.5 / state.epsilon

    def sampler(r):
        r = np.asarray(r, dtype=float)
        return wavefn.radial(state, r) * (1.0 + amplitude * np.exp(-((r - center) / width) ** 2))
    return sampler


def check_quantum_numbers(config):
    """angular_ntilde inverts angular_j on a 100-point grid; C = 0, D = 3 gives l = n_tilde + m."""
    worst = 0.0
    for n_tilde in range(5):
        for m in range(5):
            for C in (0.0, 0.1, 0.5, 1.0):
                j = spectrum.angular_j(n_tilde, m, C, 1.5, 3).j
                worst = max(worst, abs(spectrum.angular_ntilde(j, m, C, 1.5, 3) - n_tilde))
            ell = spectrum.angular_j(n_tilde, m, 0.0, 1.5, 3).j
            worst = max(worst, abs(ell - (n_tilde + m)))
    return CheckResult('quantum_number_algebra', worst <= 1e-10, worst, 1e-10)


def check_three_dimensional(config):
    """D-dimensional formulas at D = 3 against explicit three-dimensional expressions."""
    deviations = []
    mu = 1.0
    for qe in (0.3, 1.0):
        for n in range(3):
            for ell in range(3):
                spec = PotentialSpec.general(qe, 0.0)
                x = qe * qe
                explicit = mu * (1 - 2 * x / (x + (2 * n + 2 * ell + 2) ** 2))
                deviations.append(abs(spectrum.coulomb_energy(qe, spec, n, ell).value - explicit))

    spec = PotentialSpec.kratzer(0.1, 1.0, C=0.2)
    for q in (QuantumNumbers(0, 0, 0), QuantumNumbers(1, 1, 0), QuantumNumbers(2, 0, 2)):
        m_prime = math.sqrt(q.m ** 2 + 2 * mu * spec.C)
        ell_prime = q.n_tilde + m_prime
        explicit = -2 * mu * spec.A ** 2 / (2 * q.n + 1 + math.sqrt((2 * ell_prime + 1) ** 2
                                                                   + 8 * mu * (spec.B - spec.C))) ** 2
        deviations.append(abs(spectrum.nonrel_energy(spec, q).value - explicit))

        energy = 0.97
        j_prime = q.n_tilde + math.sqrt(q.m ** 2 + spec.C * (mu + energy))
        explicit_g = ((1 + 2 * q.n + math.sqrt((2 * j_prime + 1) ** 2 + 4 * (spec.B - spec.C) * (mu + energy)))
                      * math.sqrt(mu - energy) - spec.A * math.sqrt(mu + energy))
        deviations.append(abs(spectrum.noncentral_condition(spec, q, energy)[0] - explicit_g))
    measured = float(max(deviations))
    return CheckResult('d3_reduction', measured <= 1e-12, measured, 1e-12)


def radial_overlaps(config):
    """Off-diagonal radial overlaps of central Kratzer states (reported, not asserted)."""
    spec = PotentialSpec.kratzer(0.1, 1.0)
    states = []
    for n in range(3):
        level = spectrum.solve_radial_relativistic(spec, n, 0.0)[0]
        states.append(wavefn.radial_state(spec, level, n, 0.0))
    overlaps = {}
    for a in range(3):
        for b in range(a + 1, 3):
            result = wavefn.radial_overlap(states[a], states[b], rtol=config.setting('quad_rtol'))
            overlaps[f"{a}_{b}"] = result.value
    return overlaps


CHECKS = [
    ('nu_angular_regression', check_nu_angular),
    ('nu_radial_regression', check_nu_radial),
    ('coulomb_exactness', check_coulomb),
    ('series_order', check_series_order),
    ('oracle_relativistic', check_oracle_relativistic),
    ('oracle_nonrelativistic', check_oracle_nonrelativistic),
    ('oracle_angular', check_oracle_angular),
    ('oracle_convergence', check_oracle_convergence),
    ('nonrel_limit', check_nonrel_limit),
    ('normalization', check_normalization),
    ('ode_residuals', check_ode_residuals),
    ('quantum_number_algebra', check_quantum_numbers),
    ('d3_reduction', check_three_dimensional),
]
