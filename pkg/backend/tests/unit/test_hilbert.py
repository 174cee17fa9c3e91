# File: backend/tests/unit/test_hilbert.py
# Purpose: Layout bookkeeping, embedded operators, partial traces and fidelity helpers.
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.hilbert import (
    BasisLabel,
    SpaceLayout,
    Spin,
    basis_state,
    excitation_operator,
    expectation,
    fidelity,
    format_label,
    is_local,
    mode_excitation_index,
    mode_operator,
    operator_schmidt_rank,
    partial_trace,
    pauli,
    qubit_operator,
    reduced_purity,
    single_excitation_index,
    spin_state,
    state_fidelity,
)
from app.core.numkit import outer


class TestSpaceLayout:
    """Factor order is A, B, q1..qN with the first factor most significant."""

    def test_bimodal_dims(self):
        layout = SpaceLayout.bimodal(2, nmax=2)
        assert layout.factors == ("A", "B", "q1", "q2")
        assert layout.dims == (3, 3, 2, 2)
        assert layout.total_dim == 36
        assert layout.qubit_factor(2) == 3

    def test_qubit_only_dims(self):
        layout = SpaceLayout.qubits(3)
        assert not layout.has_modes
        assert layout.total_dim == 8
        assert layout.qubit_factor(1) == 0

    def test_empty_layout_rejected(self):
        with pytest.raises(InvalidParameterError):
            SpaceLayout.qubits(0)

    def test_bad_qubit_index(self):
        with pytest.raises(InvalidParameterError):
            SpaceLayout.bimodal(1).qubit_factor(2)

    def test_unknown_factor(self):
        with pytest.raises(InvalidParameterError):
            SpaceLayout.qubits(2).factor_index("A")


class TestBasis:
    def test_excitation_indices(self, layout_n1, layout_n2):
        assert single_excitation_index(1, layout_n2) == 1
        assert single_excitation_index(2, layout_n2) == 2
        assert mode_excitation_index("A", layout_n1) == 5
        assert mode_excitation_index("B", layout_n1) == 3

    def test_basis_state_matches_index(self, layout_n1):
        psi = basis_state(BasisLabel(1, 0, (Spin.DOWN,)), layout_n1)
        assert np.flatnonzero(psi).tolist() == [mode_excitation_index("A", layout_n1)]

    def test_format_label(self, layout_n1):
        assert format_label(5, layout_n1) == "|10↓>"
        assert format_label(0, SpaceLayout.qubits(2)) == "|↑↑>"

    def test_spin_state_convention(self):
        assert_allclose(spin_state([Spin.UP]), [1, 0])
        assert_allclose(spin_state([Spin.DOWN, Spin.UP]), [0, 0, 1, 0])


class TestOperators:
    def test_pauli_convention(self):
        up = np.array([1, 0])
        down = np.array([0, 1])
        assert_allclose(pauli("z") @ up, up)
        assert_allclose(pauli("plus") @ down, up)
        assert_allclose(pauli("minus") @ up, down)

    def test_unknown_pauli(self):
        with pytest.raises(InvalidParameterError):
            pauli("w")

    def test_truncated_number_operator(self):
        layout = SpaceLayout.bimodal(1, nmax=3)
        a = mode_operator("A", layout)
        number = a.conj().T @ a
        expected = np.kron(np.kron(np.diag([0, 1, 2, 3]), np.eye(4)), np.eye(2))
        assert_allclose(number, expected, atol=1e-12)

    def test_qubit_only_layout_has_no_modes(self):
        with pytest.raises(InvalidParameterError):
            mode_operator("A", SpaceLayout.qubits(2))

    def test_excitation_operator_counts(self, layout_n2):
        psi = np.zeros(layout_n2.total_dim, dtype=complex)
        psi[single_excitation_index(1, layout_n2)] = 1
        assert expectation(excitation_operator(layout_n2), psi).real == pytest.approx(1.0)

    def test_local_and_entangling_operators(self):
        layout = SpaceLayout.qubits(2)
        local = np.kron(pauli("x"), pauli("z"))
        entangling = np.kron(pauli("z"), pauli("z")) + np.kron(pauli("x"), pauli("x"))
        assert operator_schmidt_rank(local, [0], layout) == 1
        assert operator_schmidt_rank(entangling, [0], layout) == 2
        assert is_local(local, layout)
        assert not is_local(entangling, layout)

    def test_qubit_operator_acts_on_its_factor(self):
        layout = SpaceLayout.qubits(2)
        flipped = qubit_operator("x", 2, layout) @ spin_state([Spin.UP, Spin.UP])
        assert_allclose(flipped, spin_state([Spin.UP, Spin.DOWN]))


class TestReductions:
    def test_partial_trace_of_product(self, random_density):
        layout = SpaceLayout.qubits(2)
        rho_a = random_density(2)
        rho_b = random_density(2)
        joint = np.kron(rho_a, rho_b)
        assert_allclose(partial_trace(joint, [0], layout), rho_a, atol=1e-12)
        assert_allclose(partial_trace(joint, [1], layout), rho_b, atol=1e-12)

    def test_partial_trace_shape_checked(self):
        with pytest.raises(DimensionMismatchError):
            partial_trace(np.eye(3), [0], SpaceLayout.qubits(2))

    def test_partial_trace_needs_a_kept_factor(self):
        with pytest.raises(InvalidParameterError):
            partial_trace(np.eye(4) / 4, [], SpaceLayout.qubits(2))

    def test_bell_pair_reduced_purity(self):
        layout = SpaceLayout.qubits(2)
        bell = (spin_state([Spin.UP, Spin.DOWN]) + spin_state([Spin.DOWN, Spin.UP])) / math.sqrt(2)
        assert reduced_purity(bell, [0], layout) == pytest.approx(0.5)


class TestFidelity:
    def test_pure_fidelity(self):
        psi = np.array([1, 1j]) / math.sqrt(2)
        assert fidelity(psi, outer(psi)) == pytest.approx(1.0)
        assert fidelity(psi, outer(np.array([1, -1j]) / math.sqrt(2))) == pytest.approx(0.0, abs=1e-12)

    def test_fidelity_with_mixed_state_is_root(self):
        assert fidelity(np.array([1, 0]), np.eye(2) / 2) == pytest.approx(math.sqrt(0.5))

    def test_state_fidelity_ignores_global_phase(self):
        psi = np.array([0.6, 0.8j])
        assert state_fidelity(psi, np.exp(0.4j) * psi) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            state_fidelity(np.ones(2), np.ones(4))

    def test_expectation_ket_and_density_agree(self):
        psi = np.array([0.6, 0.8])
        z = pauli("z")
        assert expectation(z, psi) == pytest.approx(expectation(z, outer(psi)))
        assert expectation(z, psi).real == pytest.approx(0.36 - 0.64)
