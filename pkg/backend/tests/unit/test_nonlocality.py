# File: backend/tests/unit/test_nonlocality.py
# Purpose: SASA Bell operator, local bound and violation thresholds on generated cluster states.
import numpy as np
import pytest

from app.core import dispersive
from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.numkit import is_unitary, outer
from app.core.params import JitterConfig
from app.services.nonlocality_service import (
    LOCAL_BOUND,
    QUANTUM_MAX,
    decay_threshold,
    decayed_cluster_expectation,
    local_bound_check,
    sasa_expectation,
    sasa_expectation_heisenberg,
    sasa_operator,
    sasa_sweep,
    sasa_transformation,
    violation_threshold,
)


class TestOperator:
    def test_hermitian_traceless(self):
        b = sasa_operator().matrix
        assert sasa_operator().dim == 16
        assert np.allclose(b, b.conj().T)
        assert abs(np.trace(b)) < 1e-12

    def test_spectrum_within_quantum_bound(self):
        eigenvalues = np.linalg.eigvalsh(sasa_operator().matrix)
        assert eigenvalues.max() == pytest.approx(QUANTUM_MAX)
        assert eigenvalues.min() >= -QUANTUM_MAX - 1e-12

    def test_transformation_unitary(self):
        assert is_unitary(sasa_transformation())


class TestExpectation:
    def test_generated_cluster_reaches_maximum(self):
        generated = dispersive.cluster_evolution(1.0, dispersive.cluster_time())
        assert sasa_expectation(generated) == pytest.approx(QUANTUM_MAX, abs=1e-10)
        assert sasa_expectation(outer(generated)) == pytest.approx(QUANTUM_MAX, abs=1e-10)

    def test_initial_product_state_is_local(self):
        assert sasa_expectation(dispersive.cluster_initial_state()) <= LOCAL_BOUND

    def test_heisenberg_picture_agrees(self, random_density):
        rho = random_density(16)
        assert sasa_expectation_heisenberg(rho) == pytest.approx(sasa_expectation(rho), abs=1e-12)

    def test_register_size_checked(self):
        with pytest.raises(DimensionMismatchError):
            sasa_expectation(np.ones(8) / np.sqrt(8))

    def test_product_states_respect_local_bound(self, rng):
        assert local_bound_check(300, rng) <= LOCAL_BOUND + 1e-12


class TestThreshold:
    def test_interpolated_crossing(self):
        assert violation_threshold([0.0, 0.1, 0.2], [4.0, 3.0, 1.0]) == pytest.approx(0.15)

    def test_starts_below(self):
        assert violation_threshold([0.3, 0.4], [1.9, 1.0]) == 0.3

    def test_never_crosses(self):
        assert violation_threshold([0.0, 0.1], [4.0, 2.5]) is None

    def test_custom_level(self):
        assert violation_threshold([0.0, 1.0], [4.0, 2.0], level=3.0) == pytest.approx(0.5)


class TestSweep:
    def test_small_sweep(self):
        result = sasa_sweep([0.0, 0.5, 1.0], [0.0, 5.0], JitterConfig(reps=4, seed=3))
        frame = result.to_frame()
        assert list(frame.columns) == [
            "gamma_over_lambda",
            "jitter_pct",
            "mean_B",
            "stderr",
            "reps",
            "seed",
            "threshold_gamma_star",
        ]
        assert len(frame) == 6
        ideal = frame[(frame.jitter_pct == 0.0) & (frame.gamma_over_lambda == 0.0)]["mean_B"].iloc[0]
        assert ideal == pytest.approx(QUANTUM_MAX, abs=1e-10)
        clean = frame[frame.jitter_pct == 0.0]["mean_B"].tolist()
        assert clean == sorted(clean, reverse=True)
        assert result.summary["local_bound"] == LOCAL_BOUND
        assert "threshold_gamma_star" in result.summary


class TestDecayOnly:
    # gamma/lambda grid, exact propagation: no Monte Carlo noise at zero jitter
    GAMMAS = [0.0, 0.05, 0.1, 0.3, 0.6, 1.0]

    def test_sweep_matches_closed_form(self):
        result = sasa_sweep(self.GAMMAS, [0.0], JitterConfig(reps=1))
        expected = [decayed_cluster_expectation(g) for g in self.GAMMAS]
        assert result.column("mean_B") == pytest.approx(expected, abs=1e-9)

    def test_closed_form_values(self):
        assert decayed_cluster_expectation(0.0) == pytest.approx(QUANTUM_MAX)
        assert decayed_cluster_expectation(0.05) == pytest.approx(3.77725, abs=1e-4)
        assert decayed_cluster_expectation(0.1) == pytest.approx(3.56672, abs=1e-4)

    def test_threshold(self):
        threshold = decay_threshold()
        assert threshold == pytest.approx(0.6015, abs=5e-4)
        assert decayed_cluster_expectation(threshold) == pytest.approx(LOCAL_BOUND, abs=1e-9)

    def test_negative_rate_rejected(self):
        with pytest.raises(InvalidParameterError):
            decayed_cluster_expectation(-0.1)
