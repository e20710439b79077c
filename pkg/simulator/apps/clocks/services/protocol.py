"""
One round of the clock synchronization protocol.

Alice measures clock A in the dual basis and publishes the outcome; Bob's
clock collapses to a conditional state whose dual-basis statistics depend on
the gravitational time difference delta_p. Two collapse models are offered:

  * paper mode keeps only the delta_p dependence of clock B, dropping the
    relative phase exp(-i eps1 delta_p) accumulated by clock A;
  * full mode conditions the complete joint state at t = delta_p.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from apps.qubits.services.qops import (
    Basis, Outcome, PureState, born_probabilities, condition_on_first, fidelity, to_dual_basis,
)
from core.exceptions import InvalidParameterError

from .clockmodel import ClockParams, derived_couplings, joint_state

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1
MODE_AGREEMENT_TOL = 1e-12


class ConditioningMode(str, Enum):
    PAPER = 'paper'
    FULL = 'full'


@dataclass(frozen=True)
class ProtocolConfig:
    """A single protocol round: clocks, true time difference and Alice's outcome."""
    params: ClockParams
    delta_p: float
    mode: ConditioningMode = ConditioningMode.PAPER
    alice_outcome: Outcome = Outcome.PLUS

    def __post_init__(self) -> None:
        delta_p = float(self.delta_p)
        if not math.isfinite(delta_p):
            raise InvalidParameterError(f"delta_p must be finite, got {delta_p!r}.")
        object.__setattr__(self, 'delta_p', delta_p)
        try:
            object.__setattr__(self, 'mode', ConditioningMode(self.mode))
            object.__setattr__(self, 'alice_outcome', Outcome(self.alice_outcome))
        except ValueError as exc:
            raise InvalidParameterError(str(exc)) from exc
        if self.alice_outcome.basis != Basis.DUAL:
            raise InvalidParameterError("Alice measures in the dual basis: outcome must be plus or minus.")
        if self.alice_outcome == Outcome.MINUS and self.mode == ConditioningMode.PAPER:
            raise InvalidParameterError("Conditioning on Alice's minus outcome requires full mode.")


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome counts of n dual-basis measurements of Bob's clock."""
    n: int
    k_plus: int
    seed: int
    config_hash: str = ''

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidParameterError(f"n must be >= 0, got {self.n}.")
        if not 0 <= self.k_plus <= self.n:
            raise InvalidParameterError(f"k_plus must lie in [0, {self.n}], got {self.k_plus}.")

    @property
    def k_minus(self) -> int:
        return self.n - self.k_plus


@dataclass(frozen=True)
class ModeComparison:
    paper_plus_probability: float
    full_plus_probability: float
    paper_conditioning_probability: float
    full_conditioning_probability: float
    fidelity: float

    @property
    def modes_agree(self) -> bool:
        return self.fidelity >= 1.0 - MODE_AGREEMENT_TOL


def _phase_angles(params: ClockParams, delta_p: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    couplings = derived_couplings(params)
    delta_p = np.asarray(delta_p, dtype=float)
    return params.eps2 * delta_p, couplings.eps2_prime * delta_p, couplings.zeta_prime * delta_p


def plus_probability(params: ClockParams, delta_p: ArrayLike) -> np.ndarray:
    """
    P(+) = 1/2 + [cos(eps2 d) + cos(eps2' d)] / (3 + cos(eps1 eps2 d / xi)), vectorized over d.
    """
    a, b, _ = _phase_angles(params, delta_p)
    zeta2 = derived_couplings(params).zeta2_of(delta_p)
    return 0.5 + zeta2 * (np.cos(a) + np.cos(b))


def branch_amplitudes(params: ClockParams, delta_p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Unnormalized paper-mode amplitudes (varsigma, kappa) of Bob's |+>, |-> components.

    Written with half-angle identities so that neither component loses
    precision to cancellation near delta_p = 0.
    """
    a, b, _ = _phase_angles(params, delta_p)
    sin_sum = np.sin(a) + np.sin(b)
    varsigma = 2.0 * np.cos(a / 2) ** 2 + 2.0 * np.cos(b / 2) ** 2 - 1j * sin_sum
    kappa = 2.0 * np.sin(a / 2) ** 2 + 2.0 * np.sin(b / 2) ** 2 + 1j * sin_sum
    return varsigma, kappa


def branch_probabilities(params: ClockParams, delta_p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """Cancellation-free (P(+), P(-)); both are accurate in relative terms."""
    varsigma, kappa = branch_amplitudes(params, delta_p)
    weight_plus = np.abs(varsigma) ** 2
    weight_minus = np.abs(kappa) ** 2
    total = weight_plus + weight_minus
    return weight_plus / total, weight_minus / total


def plus_probability_derivative(params: ClockParams, delta_p: ArrayLike) -> np.ndarray:
    """Analytic dP(+)/d delta_p of plus_probability."""
    couplings = derived_couplings(params)
    a, b, theta = _phase_angles(params, delta_p)
    s = np.cos(a) + np.cos(b)
    s_prime = -params.eps2 * np.sin(a) - couplings.eps2_prime * np.sin(b)
    z = 3.0 + np.cos(theta)
    return s_prime / z + s * couplings.zeta_prime * np.sin(theta) / z ** 2


def bob_probability(params: ClockParams, delta_p: float, outcome: Union[Outcome, str] = Outcome.PLUS) -> float:
    """Probability that Bob observes `outcome` (plus or minus) in the dual basis."""
    outcome = Outcome(outcome)
    if outcome.basis != Basis.DUAL:
        raise InvalidParameterError(f"Bob measures in the dual basis, got outcome '{outcome.value}'.")
    p_plus = float(plus_probability(params, delta_p))
    return p_plus if outcome == Outcome.PLUS else 1.0 - p_plus


def _paper_condition(params: ClockParams, delta_p: float) -> Tuple[float, PureState]:
    varsigma, kappa = branch_amplitudes(params, delta_p)
    amplitudes = np.array([complex(varsigma), complex(kappa)])
    norm_sq = float(np.vdot(amplitudes, amplitudes).real)
    return norm_sq / 16.0, PureState(amplitudes / math.sqrt(norm_sq), Basis.DUAL)


def condition_bob(cfg: ProtocolConfig) -> Tuple[float, PureState]:
    """
    Collapse Bob's clock on Alice's published outcome.

    Returns:
        Tuple of (probability of Alice's outcome, Bob's dual-basis state).
        In paper mode the probability is (3 + cos(zeta' delta_p)) / 4.

    Raises:
        ConditioningError: full mode with an outcome Alice cannot observe.
    """
    if cfg.mode == ConditioningMode.PAPER:
        return _paper_condition(cfg.params, cfg.delta_p)
    dual = to_dual_basis(joint_state(cfg.params, cfg.delta_p))
    return condition_on_first(dual, cfg.alice_outcome)


def bob_conditional_state(cfg: ProtocolConfig) -> PureState:
    return condition_bob(cfg)[1]


def compare_modes(params: ClockParams, delta_p: float) -> ModeComparison:
    """Evaluate both collapse models for Alice's '+' outcome side by side."""
    paper_probability, paper_state = condition_bob(ProtocolConfig(params, delta_p, ConditioningMode.PAPER))
    full_probability, full_state = condition_bob(ProtocolConfig(params, delta_p, ConditioningMode.FULL))
    comparison = ModeComparison(
        paper_plus_probability=born_probabilities(paper_state, Basis.DUAL)[0],
        full_plus_probability=born_probabilities(full_state, Basis.DUAL)[0],
        paper_conditioning_probability=paper_probability,
        full_conditioning_probability=full_probability,
        fidelity=fidelity(paper_state, full_state),
    )
    if not comparison.modes_agree:
        logger.warning(
            f"Conditioning modes disagree at delta_p={delta_p!r}: "
            f"fidelity {comparison.fidelity:.12g}"
        )
    return comparison


def mix_seed(base_seed: int, replicate: int) -> int:
    """
    Seed of replicate `replicate` in an experiment rooted at `base_seed`.

    First 64-bit word of SeedSequence([base_seed, replicate]); stable across
    platforms and numpy releases.
    """
    _check_seed(base_seed)
    if replicate < 0:
        raise InvalidParameterError(f"Replicate index must be >= 0, got {replicate}.")
    state = np.random.SeedSequence([base_seed, replicate]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _check_seed(seed: int) -> None:
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidParameterError(f"Seed must be an unsigned 64-bit integer, got {seed}.")


def sample_outcomes(
    params: ClockParams,
    delta_p: float,
    n: int,
    seed: int,
    config_hash: str = ''
) -> MeasurementRecord:
    """Draw n dual-basis outcomes of Bob's paper-mode state from a seeded generator."""
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}.")
    _check_seed(seed)
    if n == 0:
        return MeasurementRecord(n=0, k_plus=0, seed=int(seed), config_hash=config_hash)
    p_plus, _ = branch_probabilities(params, delta_p)
    rng = np.random.default_rng(int(seed))
    k_plus = int(rng.binomial(n, float(np.clip(p_plus, 0.0, 1.0))))
    logger.debug(f"Sampled {k_plus}/{n} plus outcomes with seed {seed}")
    return MeasurementRecord(n=n, k_plus=k_plus, seed=int(seed), config_hash=config_hash)
