"""Tests for the finite-difference oracle."""
import math

import numpy as np
import pytest

from kgring.models.levels import SolveMethod
from kgring.models.potential import PotentialSpec, QuantumNumbers
from kgring.services import oracle, spectrum, wavefn
from kgring.services.oracle import DegenerateSolutionWarning, GridSpec, GridTooCoarse, OdeId, ResidualParams
from kgring.services.spectrum import NoBoundState
from kgring.services.verification import perturbed_sampler

COULOMB = PotentialSpec.general(1.0, 0.0)


def test_grid_minimum_size():
    with pytest.raises(GridTooCoarse):
        GridSpec(1e-6, 10.0, 50)
    with pytest.raises(GridTooCoarse):
        GridSpec.polar_grid(199)


def test_grid_geometry():
    grid = GridSpec(1e-9, 10.0, 999)
    nodes = grid.nodes()
    assert nodes.size == 999
    assert nodes[-1] < grid.r_max
    assert grid.refined().n_points == 1998

    polar = GridSpec.polar_grid(400)
    assert polar.h == pytest.approx(0.005)
    assert polar.nodes()[0] == pytest.approx(-1.0 + 0.0025)


def test_radial_grid_needs_positive_wall():
    with pytest.raises(ValueError):
        GridSpec(0.0, 10.0, 400)


def test_decay_rate_estimate():
    assert oracle.estimate_decay_rate(COULOMB, 0, 0.0) == pytest.approx(1.0)
    with pytest.raises(NoBoundState):
        oracle.estimate_decay_rate(PotentialSpec.general(0.0, 0.1), 0, 0.0)


def test_decay_lengths():
    grid = GridSpec(1e-9, 10.0, 400)
    relativistic = spectrum.coulomb_energy(1.0, COULOMB, 0, 0)
    assert oracle.decay_lengths(grid, relativistic, 1.0) == pytest.approx(8.0)
    nonrel = spectrum.nonrel_energy(COULOMB, QuantumNumbers(0, 0, 0))
    assert oracle.decay_lengths(grid, nonrel, 1.0) == pytest.approx(10.0 * math.sqrt(-2.0 * nonrel.value))


def test_short_box_is_stretched():
    spec = PotentialSpec.kratzer(0.1, 5.0)
    closed = spectrum.nonrel_energy(spec, QuantumNumbers(0, 0, 0))
    grid = GridSpec.for_decay(oracle.estimate_decay_rate(spec, 0, 0.0))
    assert oracle.decay_lengths(grid, closed, spec.mu) < oracle.MIN_DECAY_LENGTHS

    stretched = grid.stretched(2.0)
    assert stretched.r_max == pytest.approx(2.0 * grid.r_max)
    assert stretched.n_points == grid.n_points

    level = oracle.fd_radial_eigen(spec, 0.0, relativistic=False, grid=grid)
    assert level.value == pytest.approx(closed.value, abs=1e-5)


def test_coulomb_relativistic_level():
    level = oracle.fd_radial_eigen(COULOMB, 0.0)
    assert level.value == pytest.approx(0.6, abs=1e-4)
    assert len(level.candidates) == 1
    assert level.method is SolveMethod.ORACLE


def test_kratzer_nonrelativistic_level():
    spec = PotentialSpec.kratzer(0.1, 1.0)
    level = oracle.fd_radial_eigen(spec, 0.0, relativistic=False)
    closed = spectrum.nonrel_energy(spec, QuantumNumbers(0, 0, 0)).value
    assert level.value == pytest.approx(closed, abs=1e-5)


def test_kratzer_relativistic_excited_level():
    spec = PotentialSpec.kratzer(0.1, 1.0)
    closed = spectrum.solve_radial_relativistic(spec, 1, 0.0)[0].value
    level = oracle.fd_radial_eigen(spec, 0.0, n=1)
    assert level.value == pytest.approx(closed, abs=1e-4)
    assert len(level.candidates) == 1


def test_noncentral_level():
    spec = PotentialSpec.kratzer(0.1, 1.0, C=0.5)
    q = QuantumNumbers(0, 1, 1)
    closed = spectrum.solve_noncentral_relativistic(spec, q)[0].value
    level = oracle.fd_noncentral_eigen(spec, q)
    assert abs(level.value - closed) < 1e-3 * abs(closed - spec.mu)
    assert len(level.candidates) == 1


def test_no_nonrelativistic_bound_state_in_box():
    spec = PotentialSpec.general(1e-3, 5.0)
    grid = GridSpec(1e-10, 100.0, 400)
    with pytest.raises(NoBoundState):
        oracle.fd_radial_eigen(spec, 0.0, relativistic=False, grid=grid)


def test_refinement_disagreement_raises():
    with pytest.raises(GridTooCoarse) as info:
        oracle.fd_angular_eigen(0, 0.0, 3, 1, refinement_tol=1e-14)
    assert info.value.coarse is not None
    assert info.value.fine is not None


@pytest.mark.parametrize('n_tilde,expected', [(0, 0.0), (1, 2.0), (2, 6.0)])
def test_legendre_separation_constants(n_tilde, expected):
    assert oracle.fd_angular_eigen(0, 0.0, 3, n_tilde) == pytest.approx(expected, abs=1e-4)


def test_ring_separation_constant():
    lam = oracle.fd_angular_eigen(1, 0.5, 4, 1)
    j = spectrum.angular_j(1, 1, 0.5, 1.0, 4).j
    assert lam == pytest.approx(j * (j + 2), abs=2e-3)
    assert oracle.j_from_separation(lam, 4) == pytest.approx(j, abs=1e-3)


def test_convergence_order():
    grid = GridSpec.for_decay(1.0, n_points=1000)
    errors = []
    for _ in range(3):
        errors.append(abs(oracle.radial_eigen_on_grid(COULOMB, 0.0, True, 0, grid).value - 0.6))
        grid = grid.refined()
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert orders == pytest.approx([2.0, 2.0], abs=0.3)


def test_eigenvector_matches_closed_form():
    grid = GridSpec.for_decay(1.0)
    r, R = oracle.fd_radial_eigenvector(COULOMB, 0.0, 0, 0.6, grid)
    R = R * np.sign(R[np.argmax(np.abs(R))])
    window = (r > 0.5) & (r < 5.0)
    expected = 2 * 0.8 ** 1.5 * np.exp(-0.8 * r[window])
    assert np.max(np.abs(R[window] - expected)) < 1e-4


def test_closed_form_satisfies_radial_equation():
    spec = PotentialSpec.kratzer(0.1, 1.0)
    level = spectrum.solve_radial_relativistic(spec, 1, 0.0)[0]
    state = wavefn.radial_state(spec, level, 1, 0.0)
    params = ResidualParams(spec, level.value, 0.0)
    assert oracle.residual(OdeId.RADIAL_REL, lambda r: wavefn.radial(state, r), params) < 1e-6


def test_perturbed_function_fails_residual():
    level = spectrum.coulomb_energy(1.0, COULOMB, 0, 0)
    state = wavefn.radial_state(COULOMB, level, 0, 0.0)
    params = ResidualParams(COULOMB, level.value, 0.0)
    assert oracle.residual(OdeId.RADIAL_REL, lambda r: wavefn.radial(state, r), params) < 1e-6
    assert oracle.residual('radial_rel', perturbed_sampler(state), params) > 1e-3


def test_closed_form_satisfies_polar_equation():
    spec = PotentialSpec.kratzer(0.1, 1.0, C=0.3)
    q = QuantumNumbers(0, 2, 1)
    level = spectrum.solve_noncentral_relativistic(spec, q)[0]
    derived = spectrum.derived_numbers(spec, q, level)
    state = wavefn.angular_state(q.n_tilde, q.m, spec.C, derived.alpha2_sq)
    params = ResidualParams(spec, level.value, derived.j, m=q.m)
    assert oracle.residual(OdeId.POLAR_REL, lambda t: wavefn.angular(state, t), params) < 1e-6


def test_closed_form_satisfies_nonrelativistic_equation():
    spec = PotentialSpec.kratzer(0.1, 1.0)
    q = QuantumNumbers(2, 0, 0)
    level = spectrum.nonrel_energy(spec, q)
    state = wavefn.radial_state(spec, level, q.n, 0.0)
    params = ResidualParams(spec, level.value, 0.0)
    assert oracle.residual(OdeId.RADIAL_NR, lambda r: wavefn.radial(state, r), params) < 1e-6


def test_residual_of_zero_function_warns():
    params = ResidualParams(COULOMB, 0.6, 0.0, probes=(1.0, 2.0, 3.0))
    with pytest.warns(DegenerateSolutionWarning):
        assert oracle.residual(OdeId.RADIAL_REL, lambda r: np.zeros_like(r), params) == 0.0


def test_residual_rejects_unknown_equation():
    params = ResidualParams(COULOMB, 0.6, 0.0)
    with pytest.raises(ValueError):
        oracle.residual('dirac', lambda r: np.exp(-r), params)


def test_j_from_separation_inverts():
    for D in (3, 4, 7):
        j = 1.37
        assert oracle.j_from_separation(j * (j + D - 2), D) == pytest.approx(j)
    assert math.isclose(oracle.j_from_separation(0.0, 3), 0.0, abs_tol=1e-15)


def test_critical_two_dimensional_operator_is_not_confirmed():
    # M = 2 leaves the -1/(4 r^2) term; uniform grids converge too slowly
    with pytest.raises(GridTooCoarse):
        oracle.fd_radial_eigen(PotentialSpec.general(0.5, 0.0, D=2), 0.0)
