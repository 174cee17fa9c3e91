# File: backend/tests/integration/test_figures.py
# Purpose: Whole-sweep properties: dissipation orderings, jitter degradation and the Bell-violation threshold
import math

import pytest

from app.core.params import JitterConfig
from app.services.dissipation_service import SCENARIOS, chi_sweep, scenario_by_name
from app.services.jitter_service import jitter_sweep
from app.services.nonlocality_service import LOCAL_BOUND, QUANTUM_MAX, decay_threshold, sasa_sweep
from app.services.oracle_service import OracleSettings, run_oracles
from app.services.protocol_service import build_protocol
from app.utils.validation import GridValidator

pytestmark = [pytest.mark.integration, pytest.mark.slow]

CHI_GRID = GridValidator.uniform(0.2, 0.05)
RESONANT = ("bell-modes", "w3-hybrid", "wt-hybrid")
DISPERSIVE = ("ghz3", "w-dispersive", "wN-dispersive")


def _curve(name: str, scenario: str) -> list[float]:
    return chi_sweep(build_protocol(name), scenario_by_name(scenario), CHI_GRID).column("fidelity")


class TestDissipationSweeps:
    @pytest.mark.parametrize("scenario", [s.name for s in SCENARIOS])
    @pytest.mark.parametrize("name", RESONANT)
    def test_fidelity_falls_with_chi(self, name, scenario):
        curve = _curve(name, scenario)
        assert curve[0] == pytest.approx(1.0, abs=1e-9)
        assert all(b < a for a, b in zip(curve, curve[1:]))

    def test_short_protocols_survive_longer(self):
        # equal rates: F = exp(-chi t / 2) and t(wt) < t(w3) < t(bell)
        bell, w3, wt = (_curve(name, "equal") for name in RESONANT)
        for b, w, t in list(zip(bell, w3, wt))[1:]:
            assert b < w < t

    @pytest.mark.parametrize("scenario", [s.name for s in SCENARIOS if s.name != "equal"])
    def test_equal_rates_are_the_worst_case_for_bell(self, scenario):
        equal = _curve("bell-modes", "equal")
        other = _curve("bell-modes", scenario)
        assert all(e <= o + 1e-12 for e, o in zip(equal, other))

    def test_dispersive_ordering(self):
        ghz, w, wt = (_curve(name, "equal") for name in DISPERSIVE)
        for g, a, b in list(zip(ghz, w, wt))[1:]:
            assert g < a < b

    def test_dispersive_w_matches_single_excitation_decay(self):
        spec = build_protocol("w-dispersive")
        curve = _curve("w-dispersive", "atom-weak")
        expected = [math.exp(-chi / 10 * spec.ideal_time / 2) for chi in CHI_GRID]
        assert curve == pytest.approx(expected, abs=1e-9)


class TestJitterSweeps:
    @pytest.mark.parametrize("name", DISPERSIVE + ("cluster4",))
    def test_mean_fidelity_falls_with_jitter(self, name):
        result = jitter_sweep(build_protocol(name), [0.0, 2.5, 5.0, 10.0], JitterConfig(reps=200, seed=5))
        means = result.column("mean_fidelity")
        assert means[0] == pytest.approx(1.0, abs=1e-10)
        assert all(b < a for a, b in zip(means, means[1:]))

    def test_ghz_is_the_most_timing_tolerant(self):
        cfg = JitterConfig(reps=300, seed=11)
        ghz, w3, wt = (jitter_sweep(build_protocol(name), [5.0], cfg).rows[0] for name in DISPERSIVE)
        assert ghz["mean_fidelity"] > w3["mean_fidelity"]
        assert ghz["mean_fidelity"] > wt["mean_fidelity"]
        assert abs(w3["mean_fidelity"] - wt["mean_fidelity"]) < 0.05

    def test_transit_models_agree_without_jitter(self):
        spec = build_protocol("ghz3")
        fixed = jitter_sweep(spec, [0.0], JitterConfig(reps=5), gamma=0.3).column("mean_fidelity")
        common = jitter_sweep(spec, [0.0], JitterConfig(reps=5, transit="common-stop"), gamma=0.3).column(
            "mean_fidelity"
        )
        assert fixed == pytest.approx(common, abs=1e-12)


class TestBellViolation:
    def test_decay_ends_the_violation(self):
        grid = GridValidator.uniform(1.0, 0.05)
        result = sasa_sweep(grid, [0.0], JitterConfig(reps=1))
        values = result.column("mean_B")
        assert values[0] == pytest.approx(QUANTUM_MAX, abs=1e-10)
        assert values[-1] < LOCAL_BOUND
        assert all(b < a for a, b in zip(values, values[1:]))
        threshold = result.summary["threshold_gamma_star"]
        assert threshold == pytest.approx(decay_threshold(), abs=2e-3)
        assert threshold == pytest.approx(0.6015, abs=3e-3)
        assert set(result.column("threshold_gamma_star")) == {threshold}

    def test_jittered_cluster_still_violates(self):
        result = sasa_sweep([0.0], [10.0], JitterConfig(reps=100, seed=2))
        assert result.column("mean_B")[0] > LOCAL_BOUND


def test_every_oracle_family_passes():
    result = run_oracles(["all"], OracleSettings(draws=100, seed=0))
    failed = [row["family"] for row in result.rows if not row["passed"]]
    assert failed == []
