"""
Nikiforov-Uvarov reduction for hypergeometric-type equations.

An equation psi'' + (tau_tilde/sigma) psi' + (sigma_tilde/sigma^2) psi = 0
with deg(sigma), deg(sigma_tilde) <= 2 and deg(tau_tilde) <= 1 is reduced
to polynomial data: the constant k that makes

    Q(s; k) = ((sigma' - tau_tilde)/2)^2 - sigma_tilde + k sigma

a perfect square, pi(s) = (sigma' - tau_tilde)/2 +/- sqrt(Q), and
tau = tau_tilde + 2 pi. Admissible branches have tau' < 0. Polynomials are
stored dense, lowest degree first.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from kgring.utils import polynomials as poly

logger = logging.getLogger(__name__)

REL_TOL = poly.REL_TOL
# Warn when a perfect-square root reproduces Q(s; k) only this loosely
SQUARE_TOL = 1e-9


class NUError(Exception):
    """Base class for reduction failures."""
    pass


class DegenerateProblem(NUError):
    """sigma vanishes identically or the k condition is empty."""
    pass


class NoPerfectSquare(NUError):
    """No real k turns Q(s; k) into a perfect square."""
    pass


class NoAdmissibleBranch(NUError):
    """No pi branch yields tau' < 0."""
    pass


class UnsupportedSigmaFamily(NUError):
    """Weight extraction only supports sigma = c s and sigma = c (1 - s^2)."""
    pass


@dataclass(frozen=True)
class NUProblem:
    sigma: tuple[float, ...]
    sigma_tilde: tuple[float, ...]
    tau_tilde: tuple[float, ...]

    def __post_init__(self):
        try:
            sigma = poly.as_poly(self.sigma, max_degree=2)
            sigma_tilde = poly.as_poly(self.sigma_tilde, max_degree=2)
            tau_tilde = poly.as_poly(self.tau_tilde, max_degree=1)
        except ValueError as e:
            raise DegenerateProblem(str(e)) from e
        if poly.degree(sigma) < 0:
            raise DegenerateProblem("sigma(s) vanishes identically")
        object.__setattr__(self, 'sigma', tuple(sigma))
        object.__setattr__(self, 'sigma_tilde', tuple(sigma_tilde))
        object.__setattr__(self, 'tau_tilde', tuple(tau_tilde))

    @property
    def sigma_second(self):
        """sigma'' (a constant)."""
        return 2.0 * poly.coefficient(self.sigma, 2)

    def base_quadratic(self):
        """Q(s; 0) = ((sigma' - tau_tilde)/2)^2 - sigma_tilde."""
        half = poly.scale(poly.add(poly.derivative(self.sigma), poly.scale(self.tau_tilde, -1.0)), 0.5)
        return poly.padded(poly.add(poly.mul(half, half), poly.scale(self.sigma_tilde, -1.0)))

    def half_drift(self):
        """(sigma' - tau_tilde)/2."""
        return poly.padded(poly.scale(poly.add(poly.derivative(self.sigma), poly.scale(self.tau_tilde, -1.0)), 0.5), 2)


@dataclass(frozen=True)
class PiCandidate:
    k: float
    pi: tuple[float, ...]
    branch_sign: int


@dataclass(frozen=True)
class NUSolution:
    k: float
    pi: tuple[float, ...]
    tau: tuple[float, ...]
    tau_slope: float
    branch_sign: int
    tie_broken: bool = False


@dataclass(frozen=True)
class WeightFunction:
    """
    Weight rho(s) solving (sigma rho)' = tau rho.

    'power-exponential': rho(r) = r^exponents[0] exp(-rate r)
    'jacobi':            rho(s) = (1 - s)^exponents[0] (1 + s)^exponents[1]
    """
    family: str
    exponents: tuple[float, ...]
    rate: float = 0.0

    def evaluate(self, s):
        s = np.asarray(s, dtype=float)
        if self.family == 'power-exponential':
            return s ** self.exponents[0] * np.exp(-self.rate * s)
        return (1.0 - s) ** self.exponents[0] * (1.0 + s) ** self.exponents[1]


def radial_problem(epsilon, beta_sq, gamma_sq):
    """sigma = r, tau_tilde = 0, sigma_tilde = -eps^2 r^2 + beta^2 r - gamma^2."""
    return NUProblem(sigma=(0.0, 1.0), sigma_tilde=(-gamma_sq, beta_sq, -epsilon ** 2), tau_tilde=(0.0,))


def angular_problem(m_prime, nu_prime):
    """sigma = 1 - s^2, tau_tilde = -2s, sigma_tilde = -m'^2 + (1 - s^2) nu'."""
    return NUProblem(
        sigma=(1.0, 0.0, -1.0),
        sigma_tilde=(nu_prime - m_prime ** 2, 0.0, -nu_prime),
        tau_tilde=(0.0, -2.0),
    )


def discriminant(problem, k):
    """Discriminant in s of Q(s; k)."""
    q = _quadratic_at(problem, k)
    return q[1] ** 2 - 4.0 * q[0] * q[2]


def pi_candidates(problem):
    """
    All pi(s) branches that make the square root polynomial.

    Args:
        problem: NUProblem

    Returns:
        List of PiCandidate, both sign branches for each real k root
        of the discriminant condition (at most four)
    """
    ks = _k_roots(problem)
    half = problem.half_drift()
    candidates = []
    for k in ks:
        quadratic = _quadratic_at(problem, k)
        root = _square_root(quadratic)
        if root is None:
            logger.debug("Q(s; %s) is a negative perfect square, skipping", k)
            continue
        if not poly.allclose(poly.mul(root, root), quadratic, rel_tol=SQUARE_TOL):
            logger.warning("Q(s; %s) = %s is not a perfect square to %g", k, tuple(quadratic), SQUARE_TOL)
        for sign in (1, -1):
            pi = poly.trim(poly.add(half, poly.scale(root, sign)))
            candidates.append(PiCandidate(k=k, pi=tuple(poly.padded(pi, 2)), branch_sign=sign))

    if not candidates:
        raise NoPerfectSquare("Every k root leaves a negative square under the root")
    return candidates


def select_branch(candidates, problem):
    """
    Pick the candidate whose tau = tau_tilde + 2 pi has negative slope.

    Several admissible candidates are resolved by smallest k, then most
    negative tau', then the minus sign; the result records the tie-break.
    """
    if not candidates:
        raise NoAdmissibleBranch("No candidates supplied")

    admissible = []
    for cand in candidates:
        tau = poly.padded(poly.add(problem.tau_tilde, poly.scale(cand.pi, 2.0)), 2)
        slope = tau[1]
        if slope < 0:
            admissible.append((cand.k, slope, cand.branch_sign, cand, tau))

    if not admissible:
        raise NoAdmissibleBranch("No pi branch gives tau'(s) < 0")

    admissible.sort(key=lambda item: item[:3])
    k, slope, sign, cand, tau = admissible[0]
    if len(admissible) > 1:
        logger.debug("%d admissible branches, kept k=%s", len(admissible), k)
    return NUSolution(
        k=k,
        pi=cand.pi,
        tau=tuple(tau[:2]),
        tau_slope=float(slope),
        branch_sign=sign,
        tie_broken=len(admissible) > 1,
    )


def solve(problem):
    return select_branch(pi_candidates(problem), problem)


def lambda_n(solution, problem, n):
    """lambda_n = -n tau' - n(n-1)/2 sigma''."""
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    return -n * solution.tau_slope - 0.5 * n * (n - 1) * problem.sigma_second


def lambda_from_k(solution):
    """lambda = k + pi'."""
    return solution.k + poly.coefficient(solution.pi, 1)


def rodrigues_weight(solution, problem):
    """
    Weight function of the Rodrigues formula for the two supported sigma families.

    Raises:
        UnsupportedSigmaFamily: sigma is neither c*s nor c*(1 - s^2)
    """
    sigma = poly.padded(problem.sigma)
    tau0, tau1 = poly.padded(solution.tau, 2)[:2]
    scale_ = max(np.max(np.abs(sigma)), 1.0)

    def negligible(x):
        return abs(x) <= REL_TOL * scale_

    if negligible(sigma[0]) and not negligible(sigma[1]) and negligible(sigma[2]):
        c = sigma[1]
        # rho'/rho = (tau - sigma')/sigma = (tau0 - c)/(c r) + tau1/c
        return WeightFunction('power-exponential', ((tau0 - c) / c,), rate=-tau1 / c)

    if not negligible(sigma[0]) and negligible(sigma[1]) and math.isclose(sigma[2], -sigma[0], rel_tol=REL_TOL):
        c = sigma[0]
        # rho = (1-s)^a (1+s)^b: b - a = tau0/c, a + b = -(tau1 + 2c)/c
        diff = tau0 / c
        total = -(tau1 + 2.0 * c) / c
        return WeightFunction('jacobi', (0.5 * (total - diff), 0.5 * (total + diff)))

    raise UnsupportedSigmaFamily(f"No closed-form weight for sigma with coefficients {tuple(sigma)}")


def _quadratic_at(problem, k):
    return problem.base_quadratic() + k * poly.padded(problem.sigma)


def _k_roots(problem):
    """Real roots of disc(Q(s; k)) = c2 k^2 + c1 k + c0."""
    a0, a1, a2 = problem.base_quadratic()
    s0, s1, s2 = poly.padded(problem.sigma)
    c2 = s1 * s1 - 4.0 * s0 * s2
    c1 = 2.0 * a1 * s1 - 4.0 * (a0 * s2 + a2 * s0)
    c0 = a1 * a1 - 4.0 * a0 * a2
    scale_ = max(abs(c2), abs(c1), abs(c0), 1.0)

    if abs(c2) > REL_TOL * scale_:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < -REL_TOL * max(c1 * c1, abs(4.0 * c2 * c0), 1.0):
            raise NoPerfectSquare(f"The k condition has complex roots (discriminant {disc})")
        root = math.sqrt(max(disc, 0.0))
        # Stable quadratic roots
        q = -0.5 * (c1 + math.copysign(root, c1)) if c1 != 0 else -0.5 * root
        if q == 0.0:
            return [0.0]
        ks = sorted({q / c2, c0 / q})
        return ks
    if abs(c1) > REL_TOL * scale_:
        return [-c0 / c1]
    if abs(c0) > REL_TOL * scale_:
        raise NoPerfectSquare("The discriminant does not depend on k and is nonzero")
    raise DegenerateProblem("Q(s; k) is a perfect square for every k")


def _square_root(q):
    """Degree <= 1 polynomial p with p^2 = q for a zero-discriminant quadratic, or None."""
    q0, q1, q2 = q
    scale_ = max(abs(q0), abs(q1), abs(q2), 1.0)
    if q2 > REL_TOL * scale_:
        a = math.sqrt(q2)
        return np.array([q1 / (2.0 * a), a])
    if abs(q2) <= REL_TOL * scale_:
        if q0 < -REL_TOL * scale_:
            return None
        return np.array([math.sqrt(max(q0, 0.0)), 0.0])
    return None
