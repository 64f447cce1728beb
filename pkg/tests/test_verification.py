"""Tests for the verify suite."""
import math

import pytest

from kgring.models.run_config import RunConfig
from kgring.services import verification
from kgring.services.verification import CheckResult, VerificationReport


@pytest.fixture
def config():
    return RunConfig()


@pytest.mark.parametrize('check', [
    verification.check_nu_angular,
    verification.check_nu_radial,
    verification.check_coulomb,
    verification.check_series_order,
    verification.check_nonrel_limit,
    verification.check_normalization,
    verification.check_ode_residuals,
    verification.check_quantum_numbers,
    verification.check_three_dimensional,
])
def test_analytic_checks_pass(config, check):
    result = check(config)
    assert result.passed, result.detail


def test_check_names_are_unique():
    names = [name for name, _ in verification.CHECKS]
    assert len(names) == len(set(names)) == 13


def test_crashing_check_is_recorded_as_failure(config, monkeypatch):
    def boom(config):
        raise RuntimeError('solver exploded')

    def fine(config):
        return CheckResult('fine', True, 0.0, 1.0)

    monkeypatch.setattr(verification, 'CHECKS', [('boom', boom), ('fine', fine)])
    monkeypatch.setattr(verification, 'radial_overlaps', lambda config: {'0_1': 0.01})
    report = verification.run_checks(config)

    assert not report.passed
    assert [check.name for check in report.failures] == ['boom']
    assert 'RuntimeError: solver exploded' in report.failures[0].detail
    assert report.measurements == {'radial_overlaps': {'0_1': 0.01}}


def test_report_serialization():
    report = VerificationReport(checks=[
        CheckResult('a', True, 1e-13, 1e-12),
        CheckResult('b', False, 2.0, 1.0, 'too large'),
    ])
    data = report.as_dict()
    assert data['summary'] == {'total': 2, 'passed': 1, 'failed': 1}
    assert data['checks'][1]['status'] == 'fail'
    lines = report.summary_lines()
    assert lines[0].startswith('PASS  a')
    assert '      too large' in lines
    assert lines[-1] == '1/2 checks passed'


def test_radial_overlaps_are_reported(config):
    overlaps = verification.radial_overlaps(config)
    assert set(overlaps) == {'0_1', '0_2', '1_2'}
    assert all(math.isfinite(value) and abs(value) < 1.0 for value in overlaps.values())
