"""D-dimensional formulas at D = 3 against explicit three-dimensional expressions."""
import math

import pytest

from kgring.models.potential import PotentialSpec, QuantumNumbers
from kgring.services import spectrum, wavefn

MU = 1.0
STATES = [QuantumNumbers(0, 0, 0), QuantumNumbers(1, 1, 0), QuantumNumbers(2, 0, 2), QuantumNumbers(1, 2, 1)]


def coulomb_3d(qe, n, ell):
    x = qe * qe
    return MU * (1 - 2 * x / (x + (2 * n + 2 * ell + 2) ** 2))


def ell_3d(n_tilde, m, C, alpha2_sq):
    return n_tilde + math.sqrt(m * m + C * alpha2_sq)


def kratzer_condition_3d(a0, r0, C, q, energy):
    ell = ell_3d(q.n_tilde, q.m, C, MU + energy)
    inner = (2 * ell + 1) ** 2 + 4 * (a0 * r0 ** 2 - C) * (MU + energy)
    return (1 + 2 * q.n + math.sqrt(inner)) * math.sqrt(MU - energy) - 2 * a0 * r0 * math.sqrt(MU + energy)


def kratzer_nonrel_3d(a0, r0, C, q):
    ell = ell_3d(q.n_tilde, q.m, C, 2 * MU)
    inner = (2 * ell + 1) ** 2 + 8 * MU * (a0 * r0 ** 2 - C)
    return -8 * MU * a0 ** 2 * r0 ** 2 / (2 * q.n + 1 + math.sqrt(inner)) ** 2


@pytest.mark.parametrize('qe', [0.3, 1.0, 1.7])
def test_coulomb_levels(qe):
    spec = PotentialSpec.general(qe, 0.0)
    for n in range(3):
        for ell in range(3):
            assert spectrum.coulomb_energy(qe, spec, n, ell).value == pytest.approx(coulomb_3d(qe, n, ell), abs=1e-12)


@pytest.mark.parametrize('q', STATES)
def test_angular_momentum(q):
    for C in (0.0, 0.2, 0.7):
        momenta = spectrum.angular_j(q.n_tilde, q.m, C, 1.6, 3)
        assert momenta.j_prime == pytest.approx(ell_3d(q.n_tilde, q.m, C, 1.6), abs=1e-12)


@pytest.mark.parametrize('q', STATES)
def test_noncentral_condition(q):
    spec = PotentialSpec.kratzer(0.1, 1.0, C=0.2)
    for energy in (-0.5, 0.3, 0.97):
        value, _ = spectrum.noncentral_condition(spec, q, energy)
        assert value == pytest.approx(kratzer_condition_3d(0.1, 1.0, 0.2, q, energy), abs=1e-12)


@pytest.mark.parametrize('q', STATES)
def test_nonrelativistic_levels(q):
    spec = PotentialSpec.kratzer(0.1, 1.0, C=0.2)
    assert spectrum.nonrel_energy(spec, q).value == pytest.approx(kratzer_nonrel_3d(0.1, 1.0, 0.2, q), abs=1e-12)


def test_relativistic_root_of_explicit_condition():
    spec = PotentialSpec.kratzer(0.1, 1.0, C=0.2)
    q = QuantumNumbers(1, 1, 0)
    level = spectrum.solve_noncentral_relativistic(spec, q)[0]
    assert abs(kratzer_condition_3d(0.1, 1.0, 0.2, q, level.value)) < 1e-12


def test_hydrogen_like_radial_function():
    spec = PotentialSpec.general(1.0, 0.0)
    level = spectrum.coulomb_energy(1.0, spec, 1, 0)
    state = wavefn.radial_state(spec, level, 1, 0.0)
    eps = math.sqrt(1 - level.value ** 2)
    # 2s profile: R = C (1 - eps r) e^(-eps r) with C fixed by the r^2 dr measure
    norm = math.sqrt(4 * eps ** 3)
    for r in (0.3, 1.0, 2.5, 6.0):
        explicit = norm * (1 - eps * r) * math.exp(-eps * r)
        assert wavefn.radial(state, r) == pytest.approx(explicit, rel=1e-10, abs=1e-14)
