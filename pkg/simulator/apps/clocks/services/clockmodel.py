"""
Two gravitationally interacting clock qubits.

All quantities are dimensionless Planck values: energy gaps eps1, eps2 in
units of the Planck energy, separation xi in Planck lengths and times in
Planck times. Both clocks start in |+>; the interaction only dilates the
phase rate of clock B on the branch where clock A is excited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from apps.qubits.services.qops import (
    Basis, DensityMatrix, PureState, apply_diagonal_phases, tensor_product,
)
from core.exceptions import InvalidParameterError

_PLUS = PureState(np.array([1.0, 1.0]) / math.sqrt(2.0))


@dataclass(frozen=True)
class ClockParams:
    """Dimensionless model parameters."""
    eps1: float
    eps2: float
    xi: float

    def __post_init__(self) -> None:
        for name in ('eps1', 'eps2', 'xi'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}.")
            object.__setattr__(self, name, value)
        if self.eps1 < 0:
            raise InvalidParameterError(f"eps1 must be >= 0, got {self.eps1!r}.")
        if self.eps2 <= 0:
            raise InvalidParameterError(f"eps2 must be > 0, got {self.eps2!r}.")
        if self.xi <= 0:
            raise InvalidParameterError(f"xi must be > 0, got {self.xi!r}.")

    def as_dict(self) -> dict:
        return {'eps1': self.eps1, 'eps2': self.eps2, 'xi': self.xi}


@dataclass(frozen=True)
class DerivedCouplings:
    """
    Couplings derived from ClockParams.

    zeta_prime = eps1 * eps2 / xi is the gravitational coupling and
    eps2_prime = eps2 - zeta_prime the dilated phase rate of clock B.
    """
    params: ClockParams
    eps2_prime: float
    zeta_prime: float

    def zeta1_of(self, delta_p: ArrayLike) -> np.ndarray:
        """1 / (3 + cos(zeta' delta_p)); always within [1/4, 1/2]."""
        return 1.0 / (3.0 + np.cos(self.zeta_prime * np.asarray(delta_p, dtype=float)))

    def zeta2_of(self, delta_p: ArrayLike) -> np.ndarray:
        """Same normalization written with eps1 * eps2 / xi spelled out."""
        p = self.params
        return 1.0 / (3.0 + np.cos(p.eps1 * p.eps2 / p.xi * np.asarray(delta_p, dtype=float)))


def derived_couplings(p: ClockParams) -> DerivedCouplings:
    zeta_prime = p.eps1 * p.eps2 / p.xi
    return DerivedCouplings(params=p, eps2_prime=p.eps2 - zeta_prime, zeta_prime=zeta_prime)


def energy_phases(p: ClockParams, t: float) -> np.ndarray:
    """Branch phases (0, eps2 t, eps1 t, (eps1 + eps2') t) in (00, 01, 10, 11) order."""
    couplings = derived_couplings(p)
    return np.array([0.0, p.eps2 * t, p.eps1 * t, (p.eps1 + couplings.eps2_prime) * t])


def initial_state() -> PureState:
    return tensor_product(_PLUS, _PLUS)


def joint_state(p: ClockParams, t: float) -> PureState:
    """Joint state of both clocks after coordinate time t (may be negative)."""
    return apply_diagonal_phases(initial_state(), energy_phases(p, float(t)))


def joint_density(p: ClockParams, t: float) -> DensityMatrix:
    """Computational-basis density matrix of the evolved joint state."""
    return joint_state(p, t).density()


def dual_amplitudes(p: ClockParams, t: float) -> np.ndarray:
    """(beta, alpha, eta, gamma): four times the dual-basis amplitudes of the joint state."""
    couplings = derived_couplings(p)
    e1 = np.exp(-1j * p.eps1 * t)
    e2 = np.exp(-1j * p.eps2 * t)
    e12 = e1 * np.exp(-1j * couplings.eps2_prime * t)
    beta = 1 + e1 + e2 + e12
    alpha = 1 + e1 - e2 - e12
    eta = 1 - e1 + e2 - e12
    gamma = 1 - e1 - e2 + e12
    return np.array([beta, alpha, eta, gamma])


def dual_joint_density(p: ClockParams, t: float) -> DensityMatrix:
    """Rank-one joint density in the (++, +-, -+, --) basis."""
    v = dual_amplitudes(p, float(t))
    return DensityMatrix(np.outer(v, v.conj()) / 16.0, Basis.DUAL)


def concurrence_closed_form(p: ClockParams, t: float) -> float:
    """|sin(zeta' t / 2)|, the concurrence of the evolved joint state."""
    return abs(math.sin(derived_couplings(p).zeta_prime * t / 2.0))
