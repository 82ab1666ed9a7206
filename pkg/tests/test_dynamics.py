import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from zenoion.dynamics import (
    BlockSystem,
    VibronicState,
    build_block,
    classify_block,
    level_probabilities,
    propagate_analytic,
    propagate_oracle,
    survival_probability,
)
from zenoion.fock import (
    CouplingConstants,
    DegenerateCouplingError,
    ModeVector,
    SidebandPattern,
)

from .oracles import expm_oracle

coupling_values = st.complex_numbers(
    min_magnitude=1e-2, max_magnitude=10.0, allow_nan=False, allow_infinity=False
)
times = st.floats(min_value=-30.0, max_value=30.0, allow_nan=False)


def three_level_block(alpha: complex, beta: complex) -> BlockSystem:
    """Carrier-pattern block with prescribed couplings."""
    return build_block(
        ModeVector(0, 0, 0),
        SidebandPattern((0, 0, 0), (0, 0, 0)),
        CouplingConstants(alpha, beta),
    )


class TestClassifyBlock:
    def test_one_dimensional_when_first_sideband_fails(self):
        shape = classify_block(ModeVector(0, 0, 0), SidebandPattern((1, 0, 0), (0, 0, 0)))
        assert shape.dimension == 1
        assert shape.basis_labels == ((ModeVector(0, 0, 0), 1),)

    def test_two_dimensional_when_second_sideband_fails(self):
        shape = classify_block(ModeVector(1, 0, 0), SidebandPattern((1, 0, 0), (1, 0, 0)))
        assert shape.dimension == 2
        assert shape.basis_labels[1] == (ModeVector(0, 0, 0), 2)

    def test_three_dimensional_full_chain(self):
        shape = classify_block(ModeVector(2, 1, 1), SidebandPattern((1, 0, 0), (1, 1, 1)))
        assert shape.dimension == 3
        assert shape.basis_labels[-1] == (ModeVector(0, 0, 0), 3)

    @given(
        n=st.tuples(*(st.integers(0, 5),) * 3),
        r=st.tuples(*(st.integers(0, 2),) * 3),
        l=st.tuples(*(st.integers(0, 2),) * 3),
    )
    def test_dimension_rule(self, n, r, l):
        shape = classify_block(ModeVector.of(n), SidebandPattern(r, l))
        first = all(nv >= rv for nv, rv in zip(n, r))
        second = first and all(nv - rv >= lv for nv, rv, lv in zip(n, r, l))
        expected = 3 if second else (2 if first else 1)
        assert shape.dimension == expected


class TestBuildBlock:
    def test_unit_couplings(self):
        block = build_block(
            ModeVector(1, 0, 0),
            SidebandPattern((1, 0, 0), (0, 0, 0)),
            CouplingConstants(1.0, 1.0),
        )
        assert block.dimension == 3
        assert block.coupling_12 == pytest.approx(1.0)
        assert block.coupling_23 == pytest.approx(1.0)
        assert block.chi == pytest.approx(1.0)
        assert block.angular_frequency == pytest.approx(math.sqrt(2))

    def test_degenerate_flag(self):
        block = three_level_block(0.0, 1.0)
        assert block.is_degenerate
        with pytest.raises(DegenerateCouplingError):
            _ = block.chi

    def test_one_dimensional_block_is_static(self):
        block = build_block(
            ModeVector(0, 0, 0),
            SidebandPattern((1, 0, 0), (0, 0, 0)),
            CouplingConstants(1.0, 1.0),
        )
        assert block.dimension == 1
        assert block.coupling_norm == 0.0
        assert block.angular_frequency == 0.0
        assert block.chi is None
        state = VibronicState.basis_state(1, 0)
        evolved = propagate_analytic(block, state, 5.0)
        assert_allclose(evolved.amplitudes, state.amplitudes)

    def test_missing_chain_truncates_instead_of_raising(self):
        block = build_block(
            ModeVector(1, 0, 0),
            SidebandPattern((1, 0, 0), (1, 0, 0)),
            CouplingConstants(2.0, 3.0),
        )
        assert block.dimension == 2
        assert block.coupling_23 is None
        assert block.chi == 0

    def test_coupling_norm_combines_both_couplings(self):
        block = three_level_block(3.0, 4.0)
        assert block.coupling_norm == pytest.approx(5.0)
        assert block.hamiltonian()[0, 1] == 3.0
        assert block.hamiltonian()[1, 2] == 4.0


class TestVibronicState:
    def test_requires_normalization(self):
        with pytest.raises(ValueError):
            VibronicState(np.array([1.0, 1.0]))

    def test_basis_state(self):
        state = VibronicState.basis_state(3, 1)
        assert_allclose(state.amplitudes, [0, 1, 0])

    def test_amplitudes_are_read_only(self):
        state = VibronicState.basis_state(2, 0)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0.0


class TestPropagation:
    def test_identity_at_time_zero(self):
        block = three_level_block(1.0, 2.0)
        state = VibronicState(np.array([0.6, 0.8j, 0.0]))
        assert_allclose(
            propagate_analytic(block, state, 0.0).amplitudes, state.amplitudes
        )
        assert_allclose(
            propagate_oracle(block, state, 0.0).amplitudes, state.amplitudes, atol=1e-12
        )

    def test_full_period_returns_initial_state(self):
        block = three_level_block(1.0, 3.0)
        period = 2 * math.pi / block.angular_frequency
        state = VibronicState.basis_state(3, 0)
        evolved = propagate_analytic(block, state, period)
        assert abs(state.overlap(evolved)) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_middle_state_equal_couplings_quarter_period(self):
        block = three_level_block(1.0, 1.0)
        state = VibronicState.basis_state(3, 1)
        t = (math.pi / 2) / block.angular_frequency
        evolved = propagate_analytic(block, state, t)
        assert_allclose(level_probabilities(evolved), (0.5, 0.0, 0.5), atol=1e-12)
        # third route: numpy's Hermitian eigensolver
        expected = expm_oracle(block.hamiltonian(), t) @ state.amplitudes
        assert_allclose(evolved.amplitudes, expected, atol=1e-12)

    def test_min_population_at_half_period(self):
        chi = 2.0
        block = three_level_block(1.0, chi)
        state = VibronicState.basis_state(3, 0)
        t = math.pi / block.angular_frequency
        p1 = level_probabilities(propagate_analytic(block, state, t))[0]
        assert p1 == pytest.approx(((chi**2 - 1) / (chi**2 + 1)) ** 2, abs=1e-12)

    def test_eigenvalues_are_zero_and_plus_minus_norm(self):
        block = three_level_block(0.8 + 0.3j, -1.1 + 0.2j)
        eigenvalues = np.linalg.eigvalsh(block.hamiltonian())
        norm = block.coupling_norm
        assert_allclose(eigenvalues, [-norm, 0.0, norm], atol=1e-12)

    def test_mismatched_state_dimension(self):
        block = three_level_block(1.0, 1.0)
        with pytest.raises(ValueError):
            propagate_analytic(block, VibronicState.basis_state(2, 0), 1.0)

    @given(alpha=coupling_values, beta=coupling_values, t=times)
    def test_oracle_equivalence(self, alpha, beta, t):
        block = three_level_block(alpha, beta)
        state = VibronicState.basis_state(3, 0)
        left = propagate_analytic(block, state, t)
        right = propagate_oracle(block, state, t)
        assert np.max(np.abs(left.amplitudes - right.amplitudes)) <= 1e-10

    @given(alpha=coupling_values, beta=coupling_values, t=times)
    def test_unitarity(self, alpha, beta, t):
        block = three_level_block(alpha, beta)
        state = VibronicState(np.array([0.5, 0.5j, math.sqrt(0.5)]))
        assert abs(propagate_analytic(block, state, t).norm - 1.0) <= 1e-12

    @given(alpha=coupling_values, beta=coupling_values, t=times)
    def test_reversibility(self, alpha, beta, t):
        block = three_level_block(alpha, beta)
        state = VibronicState(np.array([0.6, 0.0, 0.8]))
        there = propagate_analytic(block, state, t)
        back = propagate_analytic(block, there, -t)
        assert np.max(np.abs(back.amplitudes - state.amplitudes)) <= 1e-10

    @given(alpha=coupling_values, beta=coupling_values, t=times)
    def test_periodicity(self, alpha, beta, t):
        block = three_level_block(alpha, beta)
        period = 2 * math.pi / block.angular_frequency
        state = VibronicState(np.array([0.6, 0.8j, 0.0]))
        one = propagate_analytic(block, state, t)
        two = propagate_analytic(block, state, t + period)
        assert np.max(np.abs(one.amplitudes - two.amplitudes)) <= 1e-10

    @given(alpha=coupling_values, t=times)
    def test_two_level_rabi_limit(self, alpha, t):
        block = build_block(
            ModeVector(1, 0, 0),
            SidebandPattern((1, 0, 0), (1, 0, 0)),
            CouplingConstants(alpha, 1.0),
        )
        assert block.dimension == 2
        state = VibronicState.basis_state(2, 0)
        p1 = level_probabilities(propagate_analytic(block, state, t))[0]
        assert p1 == pytest.approx(math.cos(abs(alpha) * t) ** 2, abs=1e-12)


class TestSurvivalProbability:
    def test_two_level_quarter_period(self):
        assert survival_probability(0.0, 1.0, math.pi / 2) == pytest.approx(0.0, abs=1e-30)

    def test_unit_ratio_vanishes_at_half_period(self):
        w = math.sqrt(2)
        assert survival_probability(1.0, w, math.pi / w) == pytest.approx(0.0, abs=1e-30)

    def test_floor_at_half_period(self):
        w = math.sqrt(10)
        assert survival_probability(3.0, w, math.pi / w) == pytest.approx(0.64)

    def test_array_input(self):
        t = np.linspace(0.0, 2 * math.pi, 7)
        values = survival_probability(2.0, 1.0, t)
        assert values.shape == t.shape
        assert values[0] == pytest.approx(1.0)

    def test_requires_positive_frequency(self):
        with pytest.raises(ValueError):
            survival_probability(1.0, 0.0, 1.0)

    def test_rejects_negative_chi(self):
        with pytest.raises(ValueError):
            survival_probability(-1.0, 1.0, 1.0)

    @given(beta=coupling_values, t=times)
    def test_matches_overlap_of_propagated_state(self, beta, t):
        block = three_level_block(1.0, beta)
        state = VibronicState.basis_state(3, 0)
        evolved = propagate_analytic(block, state, t)
        direct = abs(state.overlap(evolved)) ** 2
        formula = survival_probability(abs(block.chi), block.angular_frequency, t)
        assert direct == pytest.approx(formula, abs=1e-12)


class TestLevelProbabilities:
    def test_basis_state(self):
        assert level_probabilities(VibronicState.basis_state(3, 0)) == (1.0, 0.0, 0.0)

    def test_pads_missing_levels(self):
        assert level_probabilities(VibronicState.basis_state(2, 1)) == (0.0, 1.0, 0.0)

    @given(beta=coupling_values, t=times)
    def test_nonnegative_and_normalized(self, beta, t):
        block = three_level_block(1.0, beta)
        state = VibronicState(np.array([0.5, 0.5, math.sqrt(0.5) * 1j]))
        probs = level_probabilities(propagate_analytic(block, state, t))
        assert all(p >= 0 for p in probs)
        assert sum(probs) == pytest.approx(1.0, abs=1e-12)
