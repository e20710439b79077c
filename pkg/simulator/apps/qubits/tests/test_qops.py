import math

import numpy as np
import pytest

from apps.qubits.services.qops import (
    Basis, DensityMatrix, Outcome, PureState, Subsystem, apply_diagonal_phases, born_probabilities,
    concurrence, condition_on_first, fidelity, from_dual_basis, purity, reduced_density,
    tensor_product, to_dual_basis,
)
from core.exceptions import ConditioningError, StateValidationError

SQRT_HALF = 1 / math.sqrt(2)
ZERO = PureState([1, 0])
ONE = PureState([0, 1])
PLUS = PureState([SQRT_HALF, SQRT_HALF])
MINUS = PureState([SQRT_HALF, -SQRT_HALF])
BELL = PureState([SQRT_HALF, 0, 0, SQRT_HALF])
# evolved clocks at eps1 = eps2 = 10, xi = 20, t = pi / 10
CLOCK_STATE = PureState([0.5, -0.5, -0.5, 0.5j])


def random_state(rng, size=4):
    return PureState.from_unnormalized(rng.normal(size=size) + 1j * rng.normal(size=size))


class TestPureState:

    def test_rejects_unnormalized_amplitudes(self):
        with pytest.raises(StateValidationError):
            PureState([1, 1])

    def test_rejects_wrong_length(self):
        with pytest.raises(StateValidationError):
            PureState([1, 0, 0])

    def test_rejects_non_finite(self):
        with pytest.raises(StateValidationError):
            PureState([np.nan, 0])

    def test_amplitudes_are_read_only(self):
        with pytest.raises(ValueError):
            ZERO.amplitudes[0] = 0

    def test_from_unnormalized(self):
        state = PureState.from_unnormalized([3, 4j])
        np.testing.assert_allclose(state.amplitudes, [0.6, 0.8j])

    def test_from_unnormalized_rejects_zero_vector(self):
        with pytest.raises(StateValidationError):
            PureState.from_unnormalized([0, 0, 0, 0])


class TestDensityMatrix:

    def test_rejects_non_hermitian(self):
        with pytest.raises(StateValidationError):
            DensityMatrix([[0.5, 0.5], [0.0, 0.5]])

    def test_rejects_wrong_trace(self):
        with pytest.raises(StateValidationError):
            DensityMatrix([[1.0, 0.0], [0.0, 1.0]])

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(StateValidationError):
            DensityMatrix([[1.5, 0.0], [0.0, -0.5]])


class TestTensorProduct:

    def test_plus_plus(self):
        np.testing.assert_allclose(tensor_product(PLUS, PLUS).amplitudes, [0.5] * 4, atol=1e-12)

    def test_zero_one(self):
        np.testing.assert_allclose(tensor_product(ZERO, ONE).amplitudes, [0, 1, 0, 0])

    def test_plus_minus_sign_pattern(self):
        np.testing.assert_allclose(tensor_product(PLUS, MINUS).amplitudes, [0.5, -0.5, 0.5, -0.5], atol=1e-12)

    def test_mismatched_basis_labels(self):
        with pytest.raises(StateValidationError):
            tensor_product(ZERO, PureState([1, 0], Basis.DUAL))


class TestDiagonalPhases:

    def test_zero_phases_are_identity(self):
        state = tensor_product(PLUS, PLUS)
        np.testing.assert_allclose(apply_diagonal_phases(state, [0, 0, 0, 0]).amplitudes, state.amplitudes)

    def test_hand_evaluated_phases(self):
        state = apply_diagonal_phases(tensor_product(PLUS, PLUS), [0, math.pi, math.pi, 3 * math.pi / 2])
        np.testing.assert_allclose(state.amplitudes, CLOCK_STATE.amplitudes, atol=1e-12)

    def test_global_phase_leaves_probabilities(self):
        rng = np.random.default_rng(7)
        state = random_state(rng)
        shifted = apply_diagonal_phases(state, [1.3] * 4)
        np.testing.assert_allclose(shifted.probabilities(), state.probabilities(), atol=1e-12)

    def test_rejects_dual_input(self):
        with pytest.raises(StateValidationError):
            apply_diagonal_phases(to_dual_basis(BELL), [0, 0, 0, 0])


class TestBasisChange:

    def test_zero_to_plus(self):
        dual = to_dual_basis(ZERO)
        assert dual.basis_label == Basis.DUAL
        np.testing.assert_allclose(dual.amplitudes, [SQRT_HALF, SQRT_HALF], atol=1e-12)

    def test_all_plus(self):
        np.testing.assert_allclose(to_dual_basis(tensor_product(PLUS, PLUS)).amplitudes, [1, 0, 0, 0], atol=1e-12)

    def test_mixed_signs(self):
        dual = to_dual_basis(PureState([0.5, -0.5, -0.5, -0.5]))
        np.testing.assert_allclose(dual.amplitudes, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_rejects_dual_input(self):
        with pytest.raises(StateValidationError):
            to_dual_basis(to_dual_basis(ZERO))

    def test_round_trip(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            state = random_state(rng, size=rng.choice([2, 4]))
            back = from_dual_basis(to_dual_basis(state))
            np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-12)


class TestConditioning:

    def test_product_state(self):
        psi = PureState.from_unnormalized([1, 2j])
        probability, collapsed = condition_on_first(to_dual_basis(tensor_product(PLUS, psi)), Outcome.PLUS)
        assert probability == pytest.approx(1.0, abs=1e-12)
        assert fidelity(collapsed, psi) == pytest.approx(1.0, abs=1e-12)

    def test_bell_state(self):
        probability, collapsed = condition_on_first(BELL, Outcome.ZERO)
        assert probability == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(collapsed.amplitudes, [1, 0], atol=1e-12)

    def test_clock_state_plus_outcome(self):
        probability, collapsed = condition_on_first(to_dual_basis(CLOCK_STATE), 'plus')
        assert probability == pytest.approx(0.25, abs=1e-12)
        assert fidelity(collapsed, ONE) == pytest.approx(1.0, abs=1e-12)

    def test_impossible_outcome(self):
        with pytest.raises(ConditioningError):
            condition_on_first(tensor_product(ZERO, PLUS), Outcome.ONE)

    def test_outcome_basis_must_match(self):
        with pytest.raises(StateValidationError):
            condition_on_first(BELL, Outcome.PLUS)

    @pytest.mark.parametrize('outcomes', [(Outcome.ZERO, Outcome.ONE), (Outcome.PLUS, Outcome.MINUS)])
    def test_conditioning_reproduces_reduced_state(self, outcomes):
        rng = np.random.default_rng(11)
        for _ in range(50):
            state = random_state(rng)
            if outcomes[0].basis == Basis.DUAL:
                state = to_dual_basis(state)
            mixture = sum(
                p * collapsed.density().entries
                for p, collapsed in (condition_on_first(state, outcome) for outcome in outcomes)
            )
            np.testing.assert_allclose(mixture, reduced_density(state, Subsystem.SECOND).entries, atol=1e-12)


class TestReducedDensity:

    def test_product_state_is_pure(self):
        rho = reduced_density(tensor_product(PLUS, ONE), Subsystem.FIRST)
        np.testing.assert_allclose(rho.entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)
        assert purity(rho) == pytest.approx(1.0, abs=1e-12)

    def test_bell_state_is_maximally_mixed(self):
        rho = reduced_density(BELL, 'second')
        np.testing.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-12)
        assert rho.purity() == pytest.approx(0.5, abs=1e-12)

    def test_maximally_entangled_clock_state(self):
        state = PureState([0.5, 0.5, 0.5, -0.5])
        assert concurrence(state) == pytest.approx(1.0, abs=1e-12)
        assert purity(reduced_density(state, Subsystem.SECOND)) == pytest.approx(0.5, abs=1e-12)

    def test_purity_bounds(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            value = purity(reduced_density(random_state(rng), Subsystem.FIRST))
            assert 0.5 - 1e-12 <= value <= 1 + 1e-12


class TestConcurrence:

    def test_product_state(self):
        assert concurrence(tensor_product(PLUS, MINUS)) == pytest.approx(0.0, abs=1e-12)

    def test_bell_state(self):
        assert concurrence(BELL) == pytest.approx(1.0, abs=1e-12)

    def test_clock_state(self):
        assert concurrence(CLOCK_STATE) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)

    def test_invariant_under_local_phases(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            state = random_state(rng)
            a, b = rng.uniform(-math.pi, math.pi, size=2)
            assert concurrence(apply_diagonal_phases(state, [0, b, a, a + b])) == pytest.approx(
                concurrence(state), abs=1e-12
            )

    def test_rejects_dual_basis(self):
        with pytest.raises(StateValidationError):
            concurrence(to_dual_basis(BELL))


class TestBornProbabilities:

    def test_plus_in_dual_basis(self):
        p_plus, p_minus = born_probabilities(PLUS, Basis.DUAL)
        assert p_plus == pytest.approx(1.0, abs=1e-12)
        assert p_minus == pytest.approx(0.0, abs=1e-12)

    def test_plus_in_computational_basis(self):
        assert born_probabilities(PLUS, 'computational') == pytest.approx((0.5, 0.5), abs=1e-12)

    def test_hand_normalized_dual_state(self):
        state = PureState.from_unnormalized([1 - 1j, 3 + 1j], Basis.DUAL)
        assert born_probabilities(state, Basis.DUAL) == pytest.approx((2 / 12, 10 / 12), abs=1e-12)

    def test_requires_single_qubit(self):
        with pytest.raises(StateValidationError):
            born_probabilities(BELL, Basis.COMPUTATIONAL)
