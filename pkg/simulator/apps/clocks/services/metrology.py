"""
Fisher-information analysis of the time-difference estimate.

The probe family is Bob's paper-mode conditional state as a function of
delta_p. Its quantum Fisher information is computed numerically (ground
truth) and compared against the closed-form expression, which goes negative
away from zeta' delta_p = 0 (mod 2 pi) and is therefore only evaluated,
never trusted.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.conf import settings

from apps.qubits.services.qops import PureState, from_dual_basis
from core.exceptions import InvalidParameterError, NumericalFailure

from .clockmodel import ClockParams, derived_couplings
from .protocol import (
    ConditioningMode, ProtocolConfig, bob_conditional_state, branch_probabilities,
    plus_probability_derivative,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetrologyReport:
    delta_p: float
    n: int
    qfi_numerical: float
    qfi_closed_form: float
    classical_fisher: float
    delta_precision: Optional[float]
    classical_precision: Optional[float]
    discrepancy_flag: bool


def probe_state(params: ClockParams, delta_p: float) -> PureState:
    """Bob's paper-mode state, in the computational basis."""
    return from_dual_basis(bob_conditional_state(ProtocolConfig(params, delta_p, ConditioningMode.PAPER)))


def _probe_amplitudes(params: ClockParams, delta_p: float, couplings, offset: float = 0.0) -> np.ndarray:
    # (2, e^{-i eps2 d} + e^{-i eps2' d}) / sqrt(6 + 2 cos(zeta' d)) at d = delta_p + offset.
    # The offset enters as its own phase factor: delta_p + offset is never rounded.
    u = (
        np.exp(-1j * params.eps2 * delta_p) * np.exp(-1j * params.eps2 * offset)
        + np.exp(-1j * couplings.eps2_prime * delta_p) * np.exp(-1j * couplings.eps2_prime * offset)
    )
    amplitudes = np.array([2.0 + 0j, u])
    return amplitudes / np.sqrt(np.vdot(amplitudes, amplitudes).real)


def _pure_state_qfi(psi: np.ndarray, d_psi: np.ndarray) -> float:
    return float(4.0 * (np.vdot(d_psi, d_psi).real - abs(np.vdot(psi, d_psi)) ** 2))


def default_qfi_step(params: ClockParams) -> float:
    couplings = derived_couplings(params)
    fastest = max(1.0, abs(params.eps2), abs(couplings.eps2_prime))
    return getattr(settings, 'QFI_BASE_STEP', 1e-2) / fastest


def qfi_numerical(params: ClockParams, delta_p: float, step: Optional[float] = None) -> float:
    """
    Pure-state QFI 4(<dpsi|dpsi> - |<psi|dpsi>|^2) of the probe family.

    The derivative is a Richardson tableau of central differences at step,
    step/2 and step/4. Fourth- and sixth-order estimates must agree to
    QFI_RICHARDSON_RTOL, otherwise round-off has taken over.

    Raises:
        InvalidParameterError: non-positive step.
        NumericalFailure: Richardson disagreement or a negative result.
    """
    h = default_qfi_step(params) if step is None else float(step)
    if not math.isfinite(h) or h <= 0:
        raise InvalidParameterError(f"QFI step must be positive, got {step!r}.")
    couplings = derived_couplings(params)
    delta_p = float(delta_p)

    centrals = []
    for k in range(3):
        hk = h / 2 ** k
        forward = _probe_amplitudes(params, delta_p, couplings, hk)
        backward = _probe_amplitudes(params, delta_p, couplings, -hk)
        centrals.append((forward - backward) / (2.0 * hk))
    fourth = [(4.0 * centrals[k + 1] - centrals[k]) / 3.0 for k in range(2)]
    sixth = (16.0 * fourth[1] - fourth[0]) / 15.0

    psi = _probe_amplitudes(params, delta_p, couplings)
    qfi_fourth = _pure_state_qfi(psi, fourth[1])
    qfi = _pure_state_qfi(psi, sixth)

    rtol = getattr(settings, 'QFI_RICHARDSON_RTOL', 1e-6)
    if abs(qfi - qfi_fourth) > rtol * max(1.0, abs(qfi)):
        raise NumericalFailure(
            f"QFI finite differences disagree at delta_p={delta_p!r}, step={h!r}: "
            f"{qfi_fourth!r} vs {qfi!r}",
            code='richardson_disagreement'
        )
    if qfi < -getattr(settings, 'QFI_NEGATIVE_TOL', 1e-9):
        raise NumericalFailure(f"Negative QFI {qfi!r} at delta_p={delta_p!r}.", code='negative_qfi')
    return qfi


def qfi_closed_form(params: ClockParams, delta_p: float) -> float:
    """Closed-form QFI expression, evaluated literally (it may be negative)."""
    couplings = derived_couplings(params)
    eps2, zeta = params.eps2, couplings.zeta_prime
    c = math.cos(zeta * delta_p)
    bracket = (2 * eps2 ** 2 - 2 * eps2 * zeta) * c + eps2 ** 2 + (eps2 - zeta) ** 2
    return (2 * c - 1) * bracket / (3 + c)


def qfi_taylor_limit(params: ClockParams) -> float:
    """Small-delta_p QFI (2 eps2 - zeta')^2 / 4."""
    couplings = derived_couplings(params)
    return (2 * params.eps2 - couplings.zeta_prime) ** 2 / 4


def classical_fisher(params: ClockParams, delta_p: float) -> float:
    """
    Fisher information of Bob's dual-basis measurement, P+'^2 / (P+ P-).

    Where P+ P- vanishes the ratio has the removable limit
    (2 eps2 - zeta')^2 / 4, which is returned instead.
    """
    p_plus, p_minus = branch_probabilities(params, delta_p)
    variance = float(p_plus * p_minus)
    if variance < getattr(settings, 'FISHER_REMOVABLE_VARIANCE', 1e-20):
        return qfi_taylor_limit(params)
    derivative = float(plus_probability_derivative(params, delta_p))
    return derivative ** 2 / variance


def precision_bound(fisher: float, n: int) -> float:
    """Cramer-Rao standard deviation 1 / sqrt(n F)."""
    if not math.isfinite(fisher) or fisher <= 0:
        raise InvalidParameterError(f"Fisher information must be positive, got {fisher!r}.")
    if n < 1:
        raise InvalidParameterError(f"Repetition count must be >= 1, got {n}.")
    return 1.0 / math.sqrt(n * fisher)


def is_discrepant(closed_form: float, numerical: float) -> bool:
    rtol = getattr(settings, 'DISCREPANCY_RTOL', 1e-6)
    return abs(closed_form - numerical) > rtol * max(1.0, numerical)


def _optional_bound(fisher: float, n: int) -> Optional[float]:
    return precision_bound(fisher, n) if fisher > 0 else None


def metrology_report(
    params: ClockParams,
    delta_p: float,
    n: int = 1,
    step: Optional[float] = None
) -> MetrologyReport:
    """Numerical and closed-form QFI, classical information and both precision bounds."""
    numerical = qfi_numerical(params, delta_p, step)
    closed_form = qfi_closed_form(params, delta_p)
    fisher = classical_fisher(params, delta_p)
    report = MetrologyReport(
        delta_p=float(delta_p),
        n=n,
        qfi_numerical=numerical,
        qfi_closed_form=closed_form,
        classical_fisher=fisher,
        delta_precision=_optional_bound(numerical, n),
        classical_precision=_optional_bound(fisher, n),
        discrepancy_flag=is_discrepant(closed_form, numerical),
    )
    if report.discrepancy_flag:
        logger.warning(
            f"Closed-form QFI {closed_form:.12g} disagrees with numerical {numerical:.12g} "
            f"at delta_p={delta_p!r}"
        )
    return report
