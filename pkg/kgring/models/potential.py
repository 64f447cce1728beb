"""Potential parameters and quantum numbers."""
from __future__ import annotations

from dataclasses import dataclass


class PotentialSpecError(ValueError):
    """Invalid potential parameters."""
    pass


@dataclass(frozen=True)
class PotentialSpec:
    """
    Equal scalar and vector potential -A/r + B/r^2 + C cot^2(theta)/r^2.

    All quantities are in natural units (hbar = c = 1) with the rest mass
    mu as the energy scale. A and B are independent so the Coulomb limit
    (B = 0) is expressible; use `kratzer()` for the A = 2 a0 r0,
    B = a0 r0^2 parametrization.
    """
    A: float
    B: float
    C: float = 0.0
    mu: float = 1.0
    D: int = 3
    a0: float | None = None
    r0: float | None = None

    def __post_init__(self):
        if not self.mu > 0:
            raise PotentialSpecError(f"Rest mass must be positive, got {self.mu}")
        if self.C < 0:
            raise PotentialSpecError(f"Ring coupling C must be >= 0, got {self.C}")
        if isinstance(self.D, bool) or int(self.D) != self.D or self.D < 2:
            raise PotentialSpecError(f"Dimension must be an integer >= 2, got {self.D}")
        object.__setattr__(self, 'D', int(self.D))
        if self.r0 is not None and not self.r0 > 0:
            raise PotentialSpecError(f"Equilibrium distance r0 must be positive, got {self.r0}")

    @classmethod
    def kratzer(cls, a0, r0, C=0.0, mu=1.0, D=3):
        """Kratzer plus ring-shaped potential from dissociation energy and bond length."""
        if not r0 > 0:
            raise PotentialSpecError(f"Equilibrium distance r0 must be positive, got {r0}")
        return cls(A=2.0 * a0 * r0, B=a0 * r0 ** 2, C=C, mu=mu, D=D, a0=a0, r0=r0)

    @classmethod
    def general(cls, A, B, C=0.0, mu=1.0, D=3):
        """Independent radial couplings; B = 0 gives the Coulomb tail."""
        return cls(A=A, B=B, C=C, mu=mu, D=D)

    @property
    def is_kratzer(self):
        return self.a0 is not None

    def replace(self, **changes):
        """Copy with some fields changed, keeping the Kratzer map consistent."""
        if self.is_kratzer and not {'A', 'B'} & changes.keys():
            params = {'a0': self.a0, 'r0': self.r0, 'C': self.C, 'mu': self.mu, 'D': self.D}
            params.update(changes)
            return PotentialSpec.kratzer(**params)
        params = {'A': self.A, 'B': self.B, 'C': self.C, 'mu': self.mu, 'D': self.D}
        params.update({k: v for k, v in changes.items() if k not in ('a0', 'r0')})
        return PotentialSpec.general(**params)


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    """Radial node count n, polar index n_tilde and azimuthal integer m."""
    n: int
    n_tilde: int = 0
    m: int = 0

    def __post_init__(self):
        for name in ('n', 'n_tilde', 'm'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise PotentialSpecError(f"Quantum number {name} must be a nonnegative integer, got {value}")
            object.__setattr__(self, name, int(value))


@dataclass(frozen=True)
class DerivedNumbers:
    """Quantities derived from a solved level: m', j, j', l', M, zeta and the NU constants."""
    m_prime: float
    j: float
    j_prime: float
    ell_prime: float
    M: float
    zeta: float
    alpha1_sq: float
    alpha2_sq: float
    epsilon: float
    beta_sq: float
    gamma_sq4: float

    def as_dict(self):
        return {
            'm_prime': self.m_prime,
            'j': self.j,
            'j_prime': self.j_prime,
            'ell_prime': self.ell_prime,
            'M': self.M,
            'zeta': self.zeta,
            'alpha1_sq': self.alpha1_sq,
            'alpha2_sq': self.alpha2_sq,
            'epsilon': self.epsilon,
            'beta_sq': self.beta_sq,
            'gamma_sq4': self.gamma_sq4,
        }
