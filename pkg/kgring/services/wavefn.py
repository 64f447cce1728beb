"""
Normalized radial, polar, azimuthal and total wavefunctions.

Factorials in the normalization constants are evaluated as Gamma functions
in log space: m' and zeta are generically non-integer.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from kgring.models.levels import EnergyLevel
from kgring.services import special_fn
from kgring.services.spectrum import m_prime as compute_m_prime

logger = logging.getLogger(__name__)

RADIAL_NODES = 60
ANGULAR_NODES = 60
AZIMUTHAL_NODES = 64


@dataclass(frozen=True)
class RadialState:
    """Radial eigenfunction data; scaled_radius = 2 epsilon r."""
    level: EnergyLevel
    zeta: float
    epsilon: float
    n: int
    norm_const: float
    D: int
    j: float = 0.0

    @property
    def log_norm_const(self):
        return math.log(self.norm_const)


@dataclass(frozen=True)
class AngularState:
    n_tilde: int
    m_prime: float
    norm_const: float


def radial_state(spec, level, n, j):
    """
    Build the normalized radial state for a solved level.

    Relativistic levels use alpha2^2 = mu + E and epsilon = sqrt(mu^2 - E^2);
    nonrelativistic levels use alpha2^2 = 2 mu and epsilon = sqrt(-2 mu E).
    """
    if level.is_relativistic:
        alpha2_sq = spec.mu + level.value
        eps_sq = spec.mu ** 2 - level.value ** 2
    else:
        alpha2_sq = 2.0 * spec.mu
        eps_sq = -2.0 * spec.mu * level.value
    if not eps_sq > 0:
        raise ValueError(f"Level {level.value} is not bound (epsilon^2 = {eps_sq})")

    epsilon = math.sqrt(eps_sq)
    zeta = math.sqrt((spec.D + 2 * j - 2) ** 2 + 4 * spec.B * alpha2_sq)
    log_c = ((1 + zeta / 2) * math.log(2 * epsilon)
             + 0.5 * (special_fn.log_gamma(n + 1) - math.log(2 * n + zeta + 1)
                      - special_fn.log_gamma(n + zeta + 1)))
    return RadialState(level=level, zeta=zeta, epsilon=epsilon, n=int(n),
                       norm_const=math.exp(log_c), D=spec.D, j=j)


def angular_state(n_tilde, m, C, alpha2_sq):
    """Polar state with m' = sqrt(m^2 + C alpha2^2) and Gamma-generalized N_n~."""
    mp = float(compute_m_prime(m, C, alpha2_sq))
    lg = special_fn.log_gamma
    log_n = (-mp * math.log(2.0) - lg(n_tilde + mp + 1)
             + 0.5 * (math.log(2 * n_tilde + 2 * mp + 1) + lg(n_tilde + 2 * mp + 1)
                      + lg(n_tilde + 1) - math.log(2.0)))
    return AngularState(n_tilde=int(n_tilde), m_prime=mp, norm_const=math.exp(log_n))


def radial(state, r):
    """R(r) = C_nj r^((zeta+2-D)/2) e^(-eps r) L_n^zeta(2 eps r)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("Radial wavefunction is defined for r > 0")
    power = 0.5 * (state.zeta + 2 - state.D)
    envelope = np.exp(state.log_norm_const + power * np.log(r) - state.epsilon * r)
    value = envelope * special_fn.laguerre(state.n, state.zeta, 2 * state.epsilon * r)
    return _unwrap(value)


def angular(state, theta):
    """H(theta) = N sin^m'(theta) P_n~^(m',m')(cos theta)."""
    theta = np.asarray(theta, dtype=float)
    s = np.cos(theta)
    value = (state.norm_const * np.abs(np.sin(theta)) ** state.m_prime
             * special_fn.jacobi(state.n_tilde, state.m_prime, state.m_prime, s))
    return _unwrap(value)


def angular_in_s(state, s):
    """H as a function of s = cos(theta)."""
    s = np.asarray(s, dtype=float)
    value = (state.norm_const * np.clip(1.0 - s * s, 0.0, None) ** (0.5 * state.m_prime)
             * special_fn.jacobi(state.n_tilde, state.m_prime, state.m_prime, s))
    return _unwrap(value)


def azimuthal(m, phi, sign=1):
    """Phi_m(phi) = exp(i sign m phi) / sqrt(2 pi)."""
    if int(m) != m:
        raise ValueError(f"Azimuthal number must be an integer, got {m}")
    phi = np.asarray(phi, dtype=float)
    value = np.exp(1j * sign * int(m) * phi) / math.sqrt(2 * math.pi)
    return complex(value) if value.ndim == 0 else value


def total(radial_state_, angular_state_, m, r, theta, phi, sign=1):
    """
    psi = R(r) H(theta) Phi(phi).

    The polar Jacobi index is n_tilde.
    """
    logger.debug("Assembling psi with polar index n_tilde=%d", angular_state_.n_tilde)
    return (np.asarray(radial(radial_state_, r)) * np.asarray(angular(angular_state_, theta))
            * azimuthal(m, phi, sign))


def radial_norm(state, nodes=RADIAL_NODES):
    """Integral of R^2 r^(D-1) over (0, inf) with a Laguerre rule matched to the weight."""
    rule = special_fn.gauss_laguerre_mapped(nodes, alpha=state.zeta, scale=2 * state.epsilon)
    return special_fn.integrate(lambda r: radial(state, r) ** 2 * r ** (state.D - 1), rule, (0.0, math.inf))


def angular_norm(state, nodes=ANGULAR_NODES):
    """Integral of H^2 over s = cos(theta) in [-1, 1], Jacobi rule matched to (1 - s^2)^m'."""
    rule = special_fn.gauss_jacobi(nodes, state.m_prime, state.m_prime)
    return special_fn.integrate(lambda s: angular_in_s(state, s) ** 2, rule, (-1.0, 1.0))


def azimuthal_norm(m, k=None, nodes=AZIMUTHAL_NODES):
    """Integral of Phi_m conj(Phi_k) over [0, 2 pi] (real part)."""
    k = m if k is None else k
    rule = special_fn.gauss_legendre(nodes)
    integrand = lambda phi: np.real(azimuthal(m, phi) * np.conj(azimuthal(k, phi)))  # noqa: E731
    return special_fn.integrate(integrand, rule, (0.0, 2 * math.pi))


def total_norm(radial_state_, angular_state_, m, radial_nodes=RADIAL_NODES,
               angular_nodes=ANGULAR_NODES, azimuthal_nodes=AZIMUTHAL_NODES):
    """
    Integral of |psi|^2 r^(D-1) dr dcos(theta) dphi on a tensor-product rule.

    Returns:
        Float value of the three-dimensional sum
    """
    r_rule = special_fn.gauss_laguerre_mapped(radial_nodes, alpha=radial_state_.zeta,
                                              scale=2 * radial_state_.epsilon)
    s_rule = special_fn.gauss_jacobi(angular_nodes, angular_state_.m_prime, angular_state_.m_prime)
    p_rule = special_fn.gauss_legendre(azimuthal_nodes)

    x = np.asarray(r_rule.nodes)
    r = x / r_rule.scale
    r_weights = (np.asarray(r_rule.weights) * np.exp(x - r_rule.alpha * np.log(x))
                 * r ** (radial_state_.D - 1) / r_rule.scale)
    s = np.asarray(s_rule.nodes)
    s_weights = np.asarray(s_rule.weights) * (1.0 - s * s) ** -s_rule.alpha
    phi = math.pi * (np.asarray(p_rule.nodes) + 1.0)
    phi_weights = math.pi * np.asarray(p_rule.weights)

    rr, ss, pp = np.meshgrid(r, s, phi, indexing='ij')
    theta = np.arccos(ss)
    psi = total(radial_state_, angular_state_, m, rr, theta, pp)
    weights = r_weights[:, None, None] * s_weights[None, :, None] * phi_weights[None, None, :]
    return float(np.sum(weights * np.abs(psi) ** 2))


def radial_overlap(state_a, state_b, rtol=None):
    """Integral of R_a R_b r^(D-1) over (0, inf) by adaptive quadrature."""
    def integrand(r):
        if r <= 0:
            return 0.0
        return float(radial(state_a, r) * radial(state_b, r) * r ** (state_a.D - 1))
    return special_fn.integrate(integrand, special_fn.adaptive(), (0.0, math.inf), rtol=rtol, atol=1e-12)


def count_nodes(values, rel_floor=1e-10):
    """Interior sign changes of a sampled function, ignoring near-zero samples."""
    values = np.asarray(values, dtype=float)
    floor = rel_floor * np.max(np.abs(values)) if values.size else 0.0
    signs = np.sign(values[np.abs(values) > floor])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _unwrap(arr):
    arr = np.asarray(arr)
    return float(arr) if arr.ndim == 0 else arr
