"""
Quantum-number algebra and energy eigenvalues.

Relativistic levels solve the transcendental conditions

    f(E) = [1 + 2n + sqrt((D+2j-2)^2 + 4(mu+E)B)] sqrt(mu-E) - A sqrt(mu+E)

(central, fixed j) and its noncentral form where j' and m' follow E through
alpha2^2 = mu + E. Roots are bracketed by a uniform sign-change scan over
(-mu, mu) and refined with Brent's method; every bracket is reported.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from kgring.config import Config
from kgring.models.levels import EnergyKind, EnergyLevel, SolveMethod
from kgring.models.potential import DerivedNumbers

logger = logging.getLogger(__name__)


class SpectrumError(Exception):
    """Base class for eigenvalue failures."""
    pass


class ComplexAngularMomentum(SpectrumError):
    """The angular radicand is negative (ring coupling too strong)."""
    pass


class NegativeIndex(SpectrumError):
    """A polar index recovered from j is negative."""
    pass


class NoBoundState(SpectrumError):
    """No root of the eigenvalue condition inside (-mu, mu)."""
    pass


class InvalidCoupling(SpectrumError):
    """The radial radicand goes negative on part of the energy window."""

    def __init__(self, message, energy_range=None):
        super().__init__(message)
        self.energy_range = energy_range


class ComplexDenominator(SpectrumError):
    """The nonrelativistic denominator is not real."""
    pass


@dataclass(frozen=True)
class AngularMomentum:
    """Effective angular momenta j (with ring shift) and j' (without), plus m'."""
    j: float
    j_prime: float
    m_prime: float


@dataclass(frozen=True)
class LimitComparison:
    predicted: EnergyLevel
    mapped: EnergyLevel
    gap: float
    relative_gap: float
    identity_residual: float


def m_prime(m, C, alpha2_sq):
    """m' = sqrt(m^2 + C alpha2^2)."""
    value = np.asarray(m * m + C * np.asarray(alpha2_sq, dtype=float))
    if np.any(value < 0):
        raise ComplexAngularMomentum(f"m'^2 = m^2 + C alpha2^2 is negative for m={m}, C={C}")
    return _unwrap(np.sqrt(value))


def angular_j(n_tilde, m, C, alpha2_sq, D):
    """
    Effective angular momentum from the polar quantum numbers.

    Args:
        n_tilde: Polar index
        m: Azimuthal integer
        C: Ring coupling
        alpha2_sq: mu + E_R (or 2 mu in the nonrelativistic map); scalar or array
        D: Spatial dimension

    Returns:
        AngularMomentum(j, j_prime, m_prime)
    """
    if D < 2:
        raise ValueError(f"Dimension must be >= 2, got {D}")
    mp = np.asarray(m_prime(m, C, alpha2_sq))
    ring = 4.0 * C * np.asarray(alpha2_sq, dtype=float)
    base = (D - 2) ** 2 + (2 * n_tilde + 2 * mp + 1) ** 2 - 1
    radicand = base - ring
    if np.any(radicand < 0):
        raise ComplexAngularMomentum(
            f"Angular radicand {np.min(radicand)} < 0 for n_tilde={n_tilde}, m={m}, C={C}, D={D}"
        )
    j = -(D - 2) / 2 + 0.5 * np.sqrt(radicand)
    j_prime = -(D - 2) / 2 + 0.5 * np.sqrt(base)
    return AngularMomentum(j=_unwrap(j), j_prime=_unwrap(j_prime), m_prime=_unwrap(mp))


def angular_ntilde(j, m, C, alpha2_sq, D):
    """Polar index recovered from j; inverse of angular_j."""
    radicand = (2 * j + 1) ** 2 + 4 * j * (D - 3) + 4 * C * alpha2_sq
    if radicand < 0:
        raise NegativeIndex(f"Polar radicand {radicand} < 0 for j={j}, D={D}")
    mp = m_prime(m, C, alpha2_sq)
    n_tilde = -(1 + 2 * mp) / 2 + 0.5 * math.sqrt(radicand)
    if n_tilde < -1e-10:
        raise NegativeIndex(f"Recovered n_tilde={n_tilde} is negative; inputs are inconsistent")
    return max(n_tilde, 0.0)


def radial_condition(spec, n, j, energy):
    """f(E) of the central relativistic condition, vectorized over energy."""
    energy = np.asarray(energy, dtype=float)
    radicand = (spec.D + 2 * j - 2) ** 2 + 4 * (spec.mu + energy) * spec.B
    with np.errstate(invalid='ignore'):
        value = ((1 + 2 * n + np.sqrt(radicand)) * np.sqrt(spec.mu - energy)
                 - spec.A * np.sqrt(spec.mu + energy))
    return _unwrap(value), _unwrap(radicand)


def noncentral_condition(spec, q, energy):
    """g(E) of the noncentral condition with j'(E) and m'(E) recomputed at every energy."""
    energy = np.asarray(energy, dtype=float)
    alpha2_sq = spec.mu + energy
    momenta = angular_j(q.n_tilde, q.m, spec.C, alpha2_sq, spec.D)
    radicand = (2 * np.asarray(momenta.j_prime) + spec.D - 2) ** 2 + 4 * (spec.B - spec.C) * alpha2_sq
    with np.errstate(invalid='ignore'):
        value = ((1 + 2 * q.n + np.sqrt(radicand)) * np.sqrt(spec.mu - energy)
                 - spec.A * np.sqrt(alpha2_sq))
    return _unwrap(value), _unwrap(radicand)


def solve_radial_relativistic(spec, n, j, scan_points=None, guard=None, residual_tol=None):
    """
    All relativistic levels of the central condition at fixed j.

    Args:
        spec: PotentialSpec
        n: Radial node count
        j: Effective angular momentum (held fixed)
        scan_points: Uniform scan resolution over the energy window
        guard: Endpoint guard as a fraction of mu
        residual_tol: Required |f(E)| as a fraction of mu

    Returns:
        List of EnergyLevel (RootSolve), one per sign change, ascending
    """
    return _scan_roots(
        lambda e: radial_condition(spec, n, j, e),
        spec.mu, scan_points, guard, residual_tol,
        label=f"n={n}, j={j}",
    )


def solve_noncentral_relativistic(spec, q, scan_points=None, guard=None, residual_tol=None):
    """
    All relativistic levels of the noncentral condition.

    The angular sector's energy dependence (m' and j' through mu + E) is
    resolved inside the scalar root function.
    """
    return _scan_roots(
        lambda e: noncentral_condition(spec, q, e),
        spec.mu, scan_points, guard, residual_tol,
        label=f"n={q.n}, n_tilde={q.n_tilde}, m={q.m}",
    )


def coulomb_energy(q_charge, spec, n, ell):
    """Closed-form Coulomb level mu (1 - 2 q^2e^2 / (q^2e^2 + (2n+2l+D-1)^2))."""
    x = q_charge ** 2
    N = 2 * n + 2 * ell + spec.D - 1
    value = spec.mu * (1.0 - 2.0 * x / (x + N ** 2))
    coulomb = spec.replace(A=q_charge, B=0.0)
    residual, _ = radial_condition(coulomb, n, ell, value)
    return EnergyLevel(value=value, kind=EnergyKind.RELATIVISTIC, method=SolveMethod.CLOSED_FORM,
                       residual=abs(residual))


def coulomb_series(q_charge, spec, n, ell, order=2):
    """Expansion of the Coulomb level in the charge, truncated after `order` terms."""
    if order not in (0, 1, 2):
        raise ValueError(f"Series order must be 0, 1 or 2, got {order}")
    x = q_charge ** 2
    N2 = float(2 * n + 2 * ell + spec.D - 1) ** 2
    value = spec.mu
    if order >= 1:
        value -= 2.0 * spec.mu * x / N2
    if order >= 2:
        value += 2.0 * spec.mu * x * x / (N2 * N2)
    exact = coulomb_energy(q_charge, spec, n, ell).value
    return EnergyLevel(value=value, kind=EnergyKind.RELATIVISTIC, method=SolveMethod.SERIES,
                       residual=abs(exact - value))


def nonrel_energy(spec, q):
    """
    Nonrelativistic Coulomb-like level.

    E_NR = -2 mu A^2 / [2n + 1 + sqrt((2l'+D-2)^2 + 8 mu (B - C))]^2 with
    m' = sqrt(m^2 + 2 mu C); for the Kratzer map 2 mu A^2 = 8 mu a0^2 r0^2.
    """
    ell_prime = angular_j(q.n_tilde, q.m, spec.C, 2.0 * spec.mu, spec.D).j_prime
    inner = (2 * ell_prime + spec.D - 2) ** 2 + 8.0 * spec.mu * (spec.B - spec.C)
    if inner < 0:
        raise ComplexDenominator(f"Nonrelativistic radicand {inner} < 0 for {q}")
    denominator = 2 * q.n + 1 + math.sqrt(inner)
    value = -2.0 * spec.mu * spec.A ** 2 / denominator ** 2
    residual = _nonrel_identity(spec, q, value)
    return EnergyLevel(value=value, kind=EnergyKind.NONRELATIVISTIC, method=SolveMethod.CLOSED_FORM,
                       residual=residual)


def nonrel_limit_map(level, spec, q):
    """
    Compare a relativistic level with its nonrelativistic counterpart.

    Returns:
        LimitComparison of E_R - mu against the closed nonrelativistic
        level, plus the residual of the noncentral condition under
        mu + E -> 2 mu, mu - E -> -E_NR
    """
    predicted = EnergyLevel(value=level.value - spec.mu, kind=EnergyKind.NONRELATIVISTIC,
                            method=level.method, residual=level.residual)
    mapped = nonrel_energy(spec, q)
    gap = predicted.value - mapped.value
    relative_gap = abs(gap) / abs(mapped.value) if mapped.value != 0 else math.inf
    return LimitComparison(
        predicted=predicted,
        mapped=mapped,
        gap=gap,
        relative_gap=relative_gap,
        identity_residual=_nonrel_identity(spec, q, mapped.value),
    )


def derived_numbers(spec, q, level, j=None):
    """
    m', j, j', l', M, zeta and the NU constants at a solved level.

    Nonrelativistic levels use alpha2^2 = 2 mu and alpha1^2 = -E_NR. `j`
    overrides the angular value (central solves at a chosen j).
    """
    if level.is_relativistic:
        alpha1_sq = spec.mu - level.value
        alpha2_sq = spec.mu + level.value
    else:
        alpha1_sq = -level.value
        alpha2_sq = 2.0 * spec.mu
    momenta = angular_j(q.n_tilde, q.m, spec.C, alpha2_sq, spec.D)
    j_value = momenta.j if j is None else j
    ell_prime = angular_j(q.n_tilde, q.m, spec.C, 2.0 * spec.mu, spec.D).j_prime
    gamma_sq4 = (spec.D + 2 * j_value - 1) * (spec.D + 2 * j_value - 3) + 4 * spec.B * alpha2_sq
    return DerivedNumbers(
        m_prime=momenta.m_prime,
        j=j_value,
        j_prime=momenta.j_prime,
        ell_prime=ell_prime,
        M=spec.D + 2 * j_value,
        zeta=math.sqrt(max(gamma_sq4 + 1, 0.0)),
        alpha1_sq=alpha1_sq,
        alpha2_sq=alpha2_sq,
        epsilon=math.sqrt(max(alpha1_sq * alpha2_sq, 0.0)),
        beta_sq=spec.A * alpha2_sq,
        gamma_sq4=gamma_sq4,
    )


def _nonrel_identity(spec, q, energy):
    """Noncentral condition with mu + E -> 2 mu and mu - E -> -E_NR."""
    if energy > 0:
        return math.inf
    two_mu = 2.0 * spec.mu
    j_prime = angular_j(q.n_tilde, q.m, spec.C, two_mu, spec.D).j_prime
    inner = (2 * j_prime + spec.D - 2) ** 2 + 4 * (spec.B - spec.C) * two_mu
    if inner < 0:
        return math.inf
    return abs((1 + 2 * q.n + math.sqrt(inner)) * math.sqrt(-energy) - spec.A * math.sqrt(two_mu))


def _scan_roots(condition, mu, scan_points, guard, residual_tol, label=''):
    scan_points = scan_points or Config.SCAN_POINTS
    guard = Config.ENDPOINT_GUARD if guard is None else guard
    residual_tol = residual_tol or Config.ROOT_RESIDUAL

    energies = np.linspace(-mu + guard * mu, mu - guard * mu, int(scan_points))
    values, radicand = condition(energies)
    values, radicand = np.atleast_1d(values), np.atleast_1d(radicand)

    bad = radicand < 0
    if np.any(bad):
        lo, hi = float(energies[bad].min()), float(energies[bad].max())
        raise InvalidCoupling(
            f"Radial radicand negative for E in [{lo:.6g}, {hi:.6g}] ({label})",
            energy_range=(lo, hi),
        )

    signs = np.sign(values)
    change = np.nonzero(signs[:-1] * signs[1:] <= 0)[0]
    # A zero exactly on a node shows up in two adjacent pairs; keep the first
    brackets = []
    for i in change:
        if brackets and brackets[-1][1] == energies[i]:
            continue
        brackets.append((float(energies[i]), float(energies[i + 1])))

    if not brackets:
        raise NoBoundState(f"No sign change of the eigenvalue condition in (-mu, mu) ({label})")
    if len(brackets) > 1:
        logger.warning("%d roots found for %s", len(brackets), label)

    def scalar(e):
        return float(condition(e)[0])

    roots = []
    for lo, hi in brackets:
        if scalar(lo) == 0.0:
            root = lo
        elif scalar(hi) == 0.0:
            root = hi
        else:
            root = brentq(scalar, lo, hi, xtol=1e-15 * mu, rtol=4 * np.finfo(float).eps, maxiter=500)
        residual = abs(scalar(root))
        if residual >= residual_tol * mu:
            logger.warning("Root %.15g for %s has residual %.3g above %.3g", root, label, residual, residual_tol * mu)
        roots.append((root, residual, (lo, hi)))

    candidates = tuple(r for r, _, _ in roots)
    levels = []
    for root, residual, bracket in roots:
        level = EnergyLevel(value=root, kind=EnergyKind.RELATIVISTIC, method=SolveMethod.ROOT_SOLVE,
                            residual=residual, bracket=bracket, candidates=candidates)
        if not level.in_window(mu):
            raise NoBoundState(f"Root {root} left the bound-state window ({label})")
        levels.append(level)
    logger.debug("Solved %s: %s", label, candidates)
    return levels


def _unwrap(arr):
    arr = np.asarray(arr)
    return float(arr) if arr.ndim == 0 else arr
