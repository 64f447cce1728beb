"""Solved energy levels."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class EnergyKind(str, Enum):
    RELATIVISTIC = 'relativistic'
    NONRELATIVISTIC = 'nonrelativistic'


class SolveMethod(str, Enum):
    CLOSED_FORM = 'closed_form'
    SERIES = 'series'
    ROOT_SOLVE = 'root_solve'
    ORACLE = 'oracle'


@dataclass(frozen=True)
class EnergyLevel:
    """
    An eigenvalue with its provenance.

    `residual` is |f(E)| of the defining equation for closed forms and root
    solves, and the refinement gap for oracle results. `candidates` holds
    every root found by the scan that produced this level.
    """
    value: float
    kind: EnergyKind
    method: SolveMethod
    residual: float = 0.0
    bracket: tuple[float, float] | None = None
    candidates: tuple[float, ...] = ()

    @property
    def is_relativistic(self):
        return self.kind is EnergyKind.RELATIVISTIC

    def in_window(self, mu):
        """Relativistic bound states lie strictly inside (-mu, mu)."""
        return -mu < self.value < mu

    def as_dict(self):
        return {
            'value': self.value,
            'kind': self.kind.value,
            'method': self.method.value,
            'residual': self.residual,
            'bracket': list(self.bracket) if self.bracket else None,
            'candidates': list(self.candidates),
        }
