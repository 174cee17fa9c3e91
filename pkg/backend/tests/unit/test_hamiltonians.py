# File: backend/tests/unit/test_hamiltonians.py
# Purpose: Rotating-frame / interaction-picture consistency and the dispersive effective Hamiltonian.
import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.hamiltonians import (
    effective_coupling,
    effective_hamiltonian,
    frame_rotation,
    free_hamiltonian,
    interaction_hamiltonian,
    rotating_frame_hamiltonian,
)
from app.core.hilbert import SpaceLayout, excitation_operator, qubit_operator
from app.core.numkit import commutator, is_hermitian, is_unitary
from app.core.params import BimodalParams, EffectiveParams


class TestBimodalModel:
    """H = Delta (nA - nB) + Omega (V_A + V_B + h.c.)"""

    def test_hermitian_and_excitation_conserving(self, layout_n2):
        p = BimodalParams(Omega=0.7, Delta=1.3, signs=(1, -1))
        h = rotating_frame_hamiltonian(p, layout_n2)
        assert is_hermitian(h)
        assert_allclose(commutator(h, excitation_operator(layout_n2)), 0, atol=1e-12)

    def test_interaction_picture_is_rotated_coupling(self, layout_n2):
        p = BimodalParams(Omega=1.0, Delta=0.9, signs=(-1, 1))
        h = rotating_frame_hamiltonian(p, layout_n2)
        coupling = h - free_hamiltonian(p, layout_n2)
        h_i = interaction_hamiltonian(p, layout_n2)
        for t in (0.0, 0.4, 2.2):
            r = frame_rotation(p.Delta, t, layout_n2)
            assert is_unitary(r)
            assert_allclose(h_i(t), r @ coupling @ r.conj().T, atol=1e-12)

    def test_inactive_qubit_decouples(self, layout_n2):
        p = BimodalParams(Omega=1.0, Delta=0.5, signs=(1, 1))
        h = rotating_frame_hamiltonian(p, layout_n2, active=[1])
        assert_allclose(commutator(h, qubit_operator("z", 2, layout_n2)), 0, atol=1e-12)

    def test_layout_must_match(self, layout_n1):
        with pytest.raises(DimensionMismatchError):
            rotating_frame_hamiltonian(BimodalParams(signs=(1, 1)), layout_n1)
        with pytest.raises(DimensionMismatchError):
            rotating_frame_hamiltonian(BimodalParams(signs=(1,)), SpaceLayout.qubits(1))

    def test_signs_validated(self):
        with pytest.raises(ValueError):
            BimodalParams(signs=(1, 0))


class TestEffectiveModel:
    def test_equal_signs_do_not_couple(self):
        h = effective_hamiltonian(EffectiveParams(lam=1.0, signs=(1, 1, 1)))
        assert_allclose(h, 0)

    def test_opposite_signs_hop(self):
        h = effective_hamiltonian(EffectiveParams(lam=0.5, signs=(-1, 1)))
        layout = SpaceLayout.qubits(2)
        hop = qubit_operator("plus", 1, layout) @ qubit_operator("minus", 2, layout)
        assert_allclose(h, -0.5 * 2 * (hop + hop.conj().T), atol=1e-12)
        assert is_hermitian(h)

    def test_present_subset(self):
        p = EffectiveParams(lam=1.0, signs=(-1, 1, 1))
        alone = effective_hamiltonian(p, present=[2, 3])
        assert_allclose(alone, 0)
        with pytest.raises(InvalidParameterError):
            effective_hamiltonian(p, present=[4])

    def test_stark_term_with_photons(self):
        p = EffectiveParams(lam=1.0, signs=(1, 1))
        layout = SpaceLayout.qubits(2)
        h = effective_hamiltonian(p, nA=1, nB=0)
        expected = -(qubit_operator("z", 1, layout) + qubit_operator("z", 2, layout))
        assert_allclose(h, expected, atol=1e-12)

    def test_lambda_alias(self):
        assert EffectiveParams.model_validate({"lambda": 0.25, "signs": (1, -1)}).lam == 0.25


class TestEffectiveCoupling:
    def test_dispersive_convention(self):
        assert effective_coupling(1.0, 20.0) == pytest.approx(0.05)

    def test_literal_convention(self):
        assert effective_coupling(1.0, 20.0, "literal") == pytest.approx(400.0)

    @pytest.mark.parametrize("omega, delta", [(0.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_rejects_non_dispersive_inputs(self, omega, delta):
        with pytest.raises(InvalidParameterError):
            effective_coupling(omega, delta)
