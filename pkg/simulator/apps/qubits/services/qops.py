"""
Two-qubit state primitives.

Fixed-dimension (2 or 4 amplitudes) complex linear algebra used by the
clock model: product states, diagonal evolution, Hadamard basis changes,
projective measurement of the first qubit, partial traces and entanglement.

Amplitude ordering is (00, 01, 10, 11) with qubit A first; in the dual basis
the same positions mean (++, +-, -+, --).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np
from django.conf import settings

from core.exceptions import ConditioningError, StateValidationError


class Basis(str, Enum):
    COMPUTATIONAL = 'computational'
    DUAL = 'dual'


class Outcome(str, Enum):
    """Projective outcome of a single qubit."""
    PLUS = 'plus'
    MINUS = 'minus'
    ZERO = 'zero'
    ONE = 'one'

    @property
    def basis(self) -> Basis:
        if self in (Outcome.PLUS, Outcome.MINUS):
            return Basis.DUAL
        return Basis.COMPUTATIONAL

    @property
    def index(self) -> int:
        return 0 if self in (Outcome.PLUS, Outcome.ZERO) else 1


class Subsystem(str, Enum):
    FIRST = 'first'
    SECOND = 'second'


HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
HADAMARD_2 = np.kron(HADAMARD, HADAMARD)


def _atol() -> float:
    return getattr(settings, 'STATE_ATOL', 1e-12)


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Normalized ket over one or two qubits.

    Construction validates length and norm; the amplitude array is a
    read-only copy, so instances can be shared freely.
    """
    amplitudes: np.ndarray
    basis_label: Basis = Basis.COMPUTATIONAL

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size not in (2, 4):
            raise StateValidationError(
                f"State must have 2 or 4 amplitudes, got {amplitudes.size}."
            )
        if not np.all(np.isfinite(amplitudes)):
            raise StateValidationError("State amplitudes must be finite.")
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > _atol():
            raise StateValidationError(f"State is not normalized (norm^2 = {norm!r}).")
        object.__setattr__(self, 'amplitudes', _frozen(amplitudes))
        object.__setattr__(self, 'basis_label', Basis(self.basis_label))

    @classmethod
    def from_unnormalized(
        cls,
        amplitudes: Sequence[complex],
        basis_label: Union[Basis, str] = Basis.COMPUTATIONAL
    ) -> PureState:
        """Build a state from any nonzero amplitude vector."""
        vector = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.sqrt(np.vdot(vector, vector).real))
        if norm == 0.0 or not np.isfinite(norm):
            raise StateValidationError("Cannot normalize a zero or non-finite vector.")
        return cls(vector / norm, basis_label)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @property
    def num_qubits(self) -> int:
        return 1 if self.dimension == 2 else 2

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.basis_label)

    def __repr__(self) -> str:
        return f"PureState({self.amplitudes!r}, {self.basis_label.value})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite 2x2 or 4x4 matrix."""
    entries: np.ndarray
    basis_label: Basis = Basis.COMPUTATIONAL

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=complex)
        if entries.shape not in ((2, 2), (4, 4)):
            raise StateValidationError(f"Density matrix must be 2x2 or 4x4, got {entries.shape}.")
        atol = _atol()
        if np.max(np.abs(entries - entries.conj().T)) > atol:
            raise StateValidationError("Density matrix is not Hermitian.")
        trace = np.trace(entries)
        if abs(trace - 1.0) > atol:
            raise StateValidationError(f"Density matrix trace is {trace!r}, expected 1.")
        lowest = float(np.linalg.eigvalsh(entries).min())
        if lowest < -getattr(settings, 'PSD_ATOL', 1e-10):
            raise StateValidationError(f"Density matrix has negative eigenvalue {lowest!r}.")
        object.__setattr__(self, 'entries', _frozen(entries))
        object.__setattr__(self, 'basis_label', Basis(self.basis_label))

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return purity(self)


def _require_basis(s: PureState, basis: Basis, operation: str) -> None:
    if s.basis_label != basis:
        raise StateValidationError(
            f"{operation} expects a {basis.value}-basis state, got {s.basis_label.value}."
        )


def _require_dimension(s: PureState, dimension: int, operation: str) -> None:
    if s.dimension != dimension:
        raise StateValidationError(
            f"{operation} expects {dimension} amplitudes, got {s.dimension}."
        )


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Kronecker product a ⊗ b of two single-qubit states."""
    _require_dimension(a, 2, 'tensor_product')
    _require_dimension(b, 2, 'tensor_product')
    if a.basis_label != b.basis_label:
        raise StateValidationError(
            f"Cannot combine {a.basis_label.value} and {b.basis_label.value} states."
        )
    return PureState(np.kron(a.amplitudes, b.amplitudes), a.basis_label)


def apply_diagonal_phases(s: PureState, phases: Sequence[float]) -> PureState:
    """Multiply amplitude k by exp(-i * phases[k])."""
    _require_dimension(s, 4, 'apply_diagonal_phases')
    _require_basis(s, Basis.COMPUTATIONAL, 'apply_diagonal_phases')
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (4,):
        raise StateValidationError(f"Expected 4 phases, got shape {phases.shape}.")
    return PureState(s.amplitudes * np.exp(-1j * phases), Basis.COMPUTATIONAL)


def _hadamard_all(s: PureState) -> np.ndarray:
    transform = HADAMARD if s.dimension == 2 else HADAMARD_2
    return transform @ s.amplitudes


def to_dual_basis(s: PureState) -> PureState:
    """Express a computational-basis state in the |±> basis of every qubit."""
    _require_basis(s, Basis.COMPUTATIONAL, 'to_dual_basis')
    return PureState(_hadamard_all(s), Basis.DUAL)


def from_dual_basis(s: PureState) -> PureState:
    """Inverse of to_dual_basis."""
    _require_basis(s, Basis.DUAL, 'from_dual_basis')
    return PureState(_hadamard_all(s), Basis.COMPUTATIONAL)


def _in_basis(s: PureState, basis: Basis) -> PureState:
    if s.basis_label == basis:
        return s
    return to_dual_basis(s) if basis == Basis.DUAL else from_dual_basis(s)


def condition_on_first(
    s: PureState,
    outcome: Union[Outcome, str]
) -> Tuple[float, PureState]:
    """
    Project the first qubit onto `outcome` and renormalize the second.

    Args:
        s: Two-qubit state whose basis label matches the outcome's basis.
        outcome: Measured outcome of qubit A.

    Returns:
        Tuple of (Born probability of the outcome, collapsed state of qubit B).
    """
    outcome = Outcome(outcome)
    _require_dimension(s, 4, 'condition_on_first')
    if outcome.basis != s.basis_label:
        raise StateValidationError(
            f"Outcome '{outcome.value}' is not a {s.basis_label.value}-basis outcome."
        )
    branch = s.amplitudes.reshape(2, 2)[outcome.index]
    probability = float(np.vdot(branch, branch).real)
    if probability < getattr(settings, 'CONDITIONING_MIN_PROBABILITY', 1e-15):
        raise ConditioningError(
            f"Outcome '{outcome.value}' has probability {probability!r}; cannot condition on it."
        )
    return probability, PureState(branch / np.sqrt(probability), s.basis_label)


def reduced_density(s: PureState, keep: Union[Subsystem, str]) -> DensityMatrix:
    """Partial trace of a two-qubit state over the qubit not kept."""
    keep = Subsystem(keep)
    _require_dimension(s, 4, 'reduced_density')
    matrix = s.amplitudes.reshape(2, 2)
    if keep == Subsystem.FIRST:
        entries = matrix @ matrix.conj().T
    else:
        entries = matrix.T @ matrix.conj()
    return DensityMatrix(entries, s.basis_label)


def concurrence(s: PureState) -> float:
    """Wootters concurrence of a pure two-qubit state, 2|a00 a11 - a01 a10|."""
    _require_dimension(s, 4, 'concurrence')
    _require_basis(s, Basis.COMPUTATIONAL, 'concurrence')
    a00, a01, a10, a11 = s.amplitudes
    return min(1.0, float(2.0 * abs(a00 * a11 - a01 * a10)))


def born_probabilities(s: PureState, basis: Union[Basis, str]) -> Tuple[float, float]:
    """
    Outcome probabilities of a single-qubit measurement.

    Returns (p_plus, p_minus) for the dual basis and (p_zero, p_one) for the
    computational basis.
    """
    _require_dimension(s, 2, 'born_probabilities')
    probabilities = _in_basis(s, Basis(basis)).probabilities()
    total = probabilities.sum()
    return float(probabilities[0] / total), float(probabilities[1] / total)


def fidelity(a: PureState, b: PureState) -> float:
    """Overlap |<a|b>|^2 of two pure states of equal dimension."""
    if a.dimension != b.dimension:
        raise StateValidationError("Fidelity needs states of equal dimension.")
    b = _in_basis(b, a.basis_label)
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2)."""
    return float(np.trace(rho.entries @ rho.entries).real)
