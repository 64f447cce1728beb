"""
Finite-difference verification of the closed forms.

Nothing here reuses a Nikiforov-Uvarov result. Radial problems are
discretized with second-order central differences on a uniform grid with
Dirichlet ends; the relativistic operator depends on E through
alpha2^2 = mu + E, so its eigenvalue is found by a nested solve: an inner
symmetric tridiagonal eigenvalue (LAPACK stebz, bisection on Sturm
sequences) inside an outer scalar root search for Lambda_n(E) = E^2 - mu^2.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from kgring.config import Config
from kgring.models.levels import EnergyKind, EnergyLevel, SolveMethod
from kgring.services.spectrum import NoBoundState

logger = logging.getLogger(__name__)

MIN_POINTS = 200
# Inner Dirichlet wall relative to the box; the eigenvalue shift is first order in r_min
R_MIN_FRACTION = 1e-12
# Bound-state boxes must span this many true decay lengths
MIN_DECAY_LENGTHS = 25.0
BOX_MARGIN = 1.2


class GridTooCoarse(ValueError):
    """Grid below the minimum size, or refinements disagree."""

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class DegenerateSolutionWarning(UserWarning):
    """Residual requested for an identically zero function."""
    pass


class Scheme(str, Enum):
    CENTRAL_SECOND_ORDER = 'central2'


class OdeId(str, Enum):
    RADIAL_REL = 'radial_rel'
    POLAR_REL = 'polar_rel'
    RADIAL_NR = 'radial_nr'


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform grid. Radial grids carry Dirichlet walls at r_min and r_max;
    polar grids are cell-centred on (-1, 1) and only use n_points.
    """
    r_min: float
    r_max: float
    n_points: int
    scheme: Scheme = Scheme.CENTRAL_SECOND_ORDER
    polar: bool = False

    def __post_init__(self):
        if self.n_points < MIN_POINTS:
            raise GridTooCoarse(f"n_points={self.n_points} is below the minimum of {MIN_POINTS}")
        if not self.polar and not 0 < self.r_min < self.r_max:
            raise ValueError(f"Radial grid needs 0 < r_min < r_max, got ({self.r_min}, {self.r_max})")

    @classmethod
    def for_decay(cls, eps_estimate, n_points=None, extent=None):
        """Box of `extent` decay lengths 1/eps_estimate."""
        if not eps_estimate > 0:
            raise ValueError(f"Decay rate estimate must be positive, got {eps_estimate}")
        r_max = (extent or Config.ORACLE_EXTENT) / eps_estimate
        return cls(r_min=R_MIN_FRACTION * r_max, r_max=r_max, n_points=int(n_points or Config.ORACLE_POINTS))

    @classmethod
    def polar_grid(cls, n_points=None):
        return cls(r_min=-1.0, r_max=1.0, n_points=int(n_points or Config.ANGULAR_POINTS), polar=True)

    @property
    def h(self):
        if self.polar:
            return 2.0 / self.n_points
        return (self.r_max - self.r_min) / (self.n_points + 1)

    def nodes(self):
        if self.polar:
            return -1.0 + (np.arange(self.n_points) + 0.5) * self.h
        return self.r_min + self.h * np.arange(1, self.n_points + 1)

    def refined(self):
        return GridSpec(self.r_min, self.r_max, 2 * self.n_points, self.scheme, self.polar)

    def stretched(self, factor):
        """Same number of points on a box `factor` times longer."""
        return GridSpec(self.r_min * factor, self.r_max * factor, self.n_points, self.scheme, self.polar)


@dataclass(frozen=True)
class ResidualParams:
    """Physical parameters of the ODE a sampled solution is checked against."""
    spec: object
    energy: float
    j: float
    m: int = 0
    probes: tuple[float, ...] | None = None


def estimate_decay_rate(spec, n, j):
    """
    Hydrogenic estimate 2 mu A / (2n + 2j + D - 1) of the decay rate.

    An upper bound of the true rate when B >= 0.
    """
    if not spec.A > 0:
        raise NoBoundState(f"No bound states for a non-attractive tail (A={spec.A})")
    return 2.0 * spec.mu * spec.A / max(2 * n + 2 * j + spec.D - 1, 1.0)


def decay_lengths(grid, level, mu):
    """
    Box size r_max in units of the level's own decay length 1/eps.

    eps = sqrt(mu^2 - E^2) for relativistic levels, sqrt(-2 mu E) otherwise.
    """
    if level.kind is EnergyKind.RELATIVISTIC:
        eps_sq = mu * mu - level.value ** 2
    else:
        eps_sq = -2.0 * mu * level.value
    return grid.r_max * math.sqrt(max(eps_sq, 0.0))


def radial_eigen_on_grid(spec, j, relativistic, n, grid, energy_samples=None):
    """
    Eigenvalue of the radial operator on a single grid.

    Returns:
        EnergyLevel (method ORACLE) with every self-consistent root in
        `candidates`; the lowest is returned as the value
    """
    centrifugal = _centrifugal_from_j(spec.D, j)
    if relativistic:
        return _self_consistent_level(
            spec.mu,
            lambda e: _radial_eigenvalue(grid, centrifugal, spec.mu + e, spec, n),
            energy_samples,
            label=f"radial n={n}, j={j}",
        )
    lam = _radial_eigenvalue(grid, centrifugal, 2.0 * spec.mu, spec, n)
    if lam >= 0:
        raise NoBoundState(f"Nonrelativistic operator has no bound state with index {n} (Lambda={lam})")
    return EnergyLevel(value=lam / (2.0 * spec.mu), kind=EnergyKind.NONRELATIVISTIC, method=SolveMethod.ORACLE)


def fd_radial_eigen(spec, j, relativistic=True, n=0, grid=None, refinement_tol=None, energy_samples=None):
    """
    Finite-difference eigenvalue of the radial equation with Richardson extrapolation.

    Args:
        spec: PotentialSpec
        j: Effective angular momentum, M = D + 2j
        relativistic: Self-consistent Klein-Gordon operator when True,
            the linear Schrodinger operator (alpha2^2 -> 2 mu) otherwise
        n: Radial index (n-th excited state)
        grid: GridSpec; defaults to a box sized from estimate_decay_rate
        refinement_tol: Largest relative disagreement allowed between the
            grid and its refinement

    Returns:
        EnergyLevel with method ORACLE; residual is the refinement gap

    Raises:
        GridTooCoarse: The two grids disagree beyond refinement_tol, or
            the box stays shorter than MIN_DECAY_LENGTHS after stretching
        NoBoundState: No sign change of Lambda_n(E) - (E^2 - mu^2)
    """
    grid = grid or GridSpec.for_decay(estimate_decay_rate(spec, n, j))
    label = f"radial n={n}, j={j}"
    return _resolve_decay(
        lambda g: _extrapolate(
            lambda h: radial_eigen_on_grid(spec, j, relativistic, n, h, energy_samples),
            g, refinement_tol, label,
        ),
        grid, spec.mu, label,
    )


def fd_angular_eigen(m, c_ring, D, n_tilde, grid=None, refinement_tol=None):
    """
    Separation constant lambda = j(j+D-2) of the polar equation.

    The operator -d/ds (1-s^2) d/ds + (m^2 + c s^2)/(1-s^2) is discretized
    by finite volumes on cell centres of (-1, 1); the face coefficient
    1-s^2 vanishes at both ends, so no boundary values are imposed.

    Returns:
        Richardson-extrapolated lambda over the grid and its refinement
    """
    grid = grid or GridSpec.polar_grid()
    if not grid.polar:
        grid = GridSpec.polar_grid(grid.n_points)
    coarse = _polar_eigenvalue(grid, m, c_ring, n_tilde)
    fine = _polar_eigenvalue(grid.refined(), m, c_ring, n_tilde)
    tol = refinement_tol or Config.ORACLE_REFINEMENT_TOL
    gap = abs(fine - coarse)
    if gap > tol * max(abs(fine), 1.0):
        raise GridTooCoarse(f"Polar eigenvalue refinements disagree: {coarse} vs {fine}", coarse, fine)
    return fine + (fine - coarse) / 3.0


def j_from_separation(lam, D):
    """Invert lambda = j(j+D-2) for the nonnegative branch."""
    return -(D - 2) / 2 + 0.5 * math.sqrt(max((D - 2) ** 2 + 4 * lam, 0.0))


def fd_noncentral_eigen(spec, q, grid=None, angular_grid=None, refinement_tol=None, energy_samples=None):
    """
    Fully coupled oracle for the noncentral problem.

    At each trial E the polar separation constant is recomputed by finite
    differences with c = C (mu + E) and fed into the radial operator.
    """
    angular_grid = angular_grid or GridSpec.polar_grid()

    def separation(e):
        return fd_angular_eigen(q.m, spec.C * (spec.mu + e), spec.D, q.n_tilde, angular_grid, refinement_tol)

    if grid is None:
        j_est = j_from_separation(separation(spec.mu), spec.D)
        grid = GridSpec.for_decay(estimate_decay_rate(spec, q.n, j_est))

    def on_grid(g):
        def eigenvalue(e):
            lam = separation(e)
            centrifugal = ((spec.D - 2) ** 2 + 4 * lam - 1) / 4.0
            return _radial_eigenvalue(g, centrifugal, spec.mu + e, spec, q.n)
        return _self_consistent_level(spec.mu, eigenvalue, energy_samples, label=f"noncentral {q}")

    label = f"noncentral {q}"
    return _resolve_decay(lambda g: _extrapolate(on_grid, g, refinement_tol, label), grid, spec.mu, label)


def fd_radial_eigenvector(spec, j, n, energy, grid, relativistic=True):
    """
    Sampled radial function R(r) = g(r) / r^((D-1)/2) at a given energy.

    Returns:
        (r, R) arrays with the integral of R^2 r^(D-1) normalized to one
    """
    alpha2_sq = spec.mu + energy if relativistic else 2.0 * spec.mu
    diag, off = _radial_operator(grid, _centrifugal_from_j(spec.D, j), alpha2_sq, spec)
    _, vectors = eigh_tridiagonal(diag, off, select='i', select_range=(n, n), lapack_driver='stebz')
    g = vectors[:, 0]
    g = g / math.sqrt(np.sum(g * g) * grid.h)
    r = grid.nodes()
    return r, g / r ** ((spec.D - 1) / 2.0)


def residual(ode_id, solution_sampler, params):
    """
    Normalized residual of a sampled solution in its defining ODE.

    Args:
        ode_id: OdeId of the equation
        solution_sampler: Vectorized callable of r (radial) or theta (polar)
        params: ResidualParams

    Returns:
        max |ODE left-hand side| / max |solution| over the probe points;
        0.0 with a DegenerateSolutionWarning for an identically zero sampler
    """
    ode_id = OdeId(ode_id)
    spec, energy = params.spec, params.energy
    x = np.asarray(params.probes if params.probes is not None else _default_probes(ode_id, spec, energy))

    values = np.asarray(solution_sampler(x), dtype=float)
    scale_ = np.max(np.abs(values))
    if scale_ == 0.0:
        warnings.warn("Residual of an identically zero function", DegenerateSolutionWarning, stacklevel=2)
        return 0.0

    # Steps shrink with the distance to the nearest singular point
    distance = np.minimum(x, math.pi - x) if ode_id is OdeId.POLAR_REL else x
    first, second = _richardson_derivatives(solution_sampler, x, 5e-3 * distance)
    sep = params.j * (params.j + spec.D - 2)

    if ode_id is OdeId.POLAR_REL:
        c = spec.C * (spec.mu + energy)
        bracket = (params.m ** 2 + c * np.cos(x) ** 2) / np.sin(x) ** 2 - sep
        lhs = second + first / np.tan(x) - bracket * values
    elif ode_id is OdeId.RADIAL_REL:
        alpha1_sq, alpha2_sq = spec.mu - energy, spec.mu + energy
        bracket = sep / x ** 2 + alpha2_sq * (alpha1_sq - spec.A / x + spec.B / x ** 2)
        lhs = second + (spec.D - 1) / x * first - bracket * values
    else:
        bracket = sep / x ** 2 - 2.0 * spec.mu * (energy + spec.A / x - spec.B / x ** 2)
        lhs = second + (spec.D - 1) / x * first - bracket * values

    return float(np.max(np.abs(lhs)) / scale_)


def _centrifugal_from_j(D, j):
    M = D + 2 * j
    return (M - 1) * (M - 3) / 4.0


def _radial_operator(grid, centrifugal, alpha2_sq, spec):
    r = grid.nodes()
    h2 = grid.h ** 2
    potential = centrifugal / r ** 2 + alpha2_sq * (spec.B / r ** 2 - spec.A / r)
    diag = 2.0 / h2 + potential
    off = np.full(grid.n_points - 1, -1.0 / h2)
    return diag, off


def _radial_eigenvalue(grid, centrifugal, alpha2_sq, spec, index):
    diag, off = _radial_operator(grid, centrifugal, alpha2_sq, spec)
    return _tridiagonal_eigenvalue(diag, off, index)


def _polar_eigenvalue(grid, m, c_ring, index):
    s = grid.nodes()
    h2 = grid.h ** 2
    faces = -1.0 + grid.h * np.arange(1, grid.n_points)
    p = 1.0 - faces ** 2
    p_left = np.concatenate(([0.0], p))
    p_right = np.concatenate((p, [0.0]))
    q = (m * m + c_ring * s * s) / (1.0 - s * s)
    diag = (p_left + p_right) / h2 + q
    off = -p / h2
    return _tridiagonal_eigenvalue(diag, off, index)


def _tridiagonal_eigenvalue(diag, off, index):
    values = eigh_tridiagonal(diag, off, eigvals_only=True, select='i',
                              select_range=(index, index), lapack_driver='stebz')
    return float(values[0])


def _self_consistent_level(mu, operator_eigenvalue, energy_samples, label):
    """Roots of Lambda_n(E) - (E^2 - mu^2) on (-mu, mu)."""
    samples = int(energy_samples or Config.ORACLE_ENERGY_SAMPLES)
    guard = Config.ENDPOINT_GUARD * mu

    def mismatch(e):
        return operator_eigenvalue(e) - (e * e - mu * mu)

    energies = np.linspace(-mu + guard, mu - guard, samples)
    values = np.array([mismatch(e) for e in energies])
    change = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    if change.size == 0:
        raise NoBoundState(f"Lambda_n(E) - (E^2 - mu^2) has no sign change ({label})")

    roots = []
    for i in change:
        roots.append(brentq(mismatch, energies[i], energies[i + 1], xtol=1e-13 * mu, maxiter=200))
    if len(roots) > 1:
        logger.warning("Self-consistent oracle found %d roots for %s: %s", len(roots), label, roots)

    i = change[0]
    return EnergyLevel(
        value=float(roots[0]),
        kind=EnergyKind.RELATIVISTIC,
        method=SolveMethod.ORACLE,
        residual=abs(mismatch(roots[0])),
        bracket=(float(energies[i]), float(energies[i + 1])),
        candidates=tuple(float(r) for r in roots),
    )


def _extrapolate(solve_on, grid, refinement_tol, label):
    tol = refinement_tol or Config.ORACLE_REFINEMENT_TOL
    coarse = solve_on(grid)
    fine = solve_on(grid.refined())
    gap = abs(fine.value - coarse.value)
    if gap > tol * max(abs(fine.value), 1e-300):
        raise GridTooCoarse(
            f"Refinements disagree for {label}: {coarse.value} ({grid.n_points} points) "
            f"vs {fine.value} ({2 * grid.n_points} points)",
            coarse.value, fine.value,
        )
    logger.debug("%s: %s -> %s", label, coarse.value, fine.value)
    return EnergyLevel(
        value=fine.value + (fine.value - coarse.value) / 3.0,
        kind=fine.kind,
        method=SolveMethod.ORACLE,
        residual=gap,
        bracket=fine.bracket,
        candidates=fine.candidates,
    )


def _resolve_decay(solve_on, grid, mu, label):
    """Solve on `grid`; re-solve once on a stretched box when the level's tail is cut short."""
    level = solve_on(grid)
    lengths = decay_lengths(grid, level, mu)
    if lengths >= MIN_DECAY_LENGTHS:
        return level

    stretched = grid.stretched(BOX_MARGIN * MIN_DECAY_LENGTHS / max(lengths, 1e-300))
    logger.info("%s: box spans %.3g decay lengths, stretching r_max %s -> %s",
                label, lengths, grid.r_max, stretched.r_max)
    level = solve_on(stretched)
    lengths = decay_lengths(stretched, level, mu)
    if lengths < MIN_DECAY_LENGTHS:
        raise GridTooCoarse(
            f"Box for {label} spans {lengths:.3g} decay lengths after stretching "
            f"(need {MIN_DECAY_LENGTHS:g})"
        )
    return level


def _default_probes(ode_id, spec, energy):
    if ode_id is OdeId.POLAR_REL:
        return np.linspace(0.05, math.pi - 0.05, 50)
    if ode_id is OdeId.RADIAL_REL:
        eps = math.sqrt(max(spec.mu ** 2 - energy ** 2, 1e-300))
    else:
        eps = math.sqrt(max(-2.0 * spec.mu * energy, 1e-300))
    return np.logspace(math.log10(0.05 / eps), math.log10(30.0 / eps), 50)


def _richardson_derivatives(f, x, h):
    """First and second central differences, Richardson-refined (fourth order)."""

    def central(step):
        fp, fm, f0 = np.asarray(f(x + step)), np.asarray(f(x - step)), np.asarray(f(x))
        return (fp - fm) / (2 * step), (fp - 2 * f0 + fm) / step ** 2

    d1_h, d2_h = central(h)
    d1_half, d2_half = central(h / 2)
    return (4 * d1_half - d1_h) / 3.0, (4 * d2_half - d2_h) / 3.0
