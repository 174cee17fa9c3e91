# File: backend/tests/unit/test_dissipation.py
# Purpose: Lindblad channels, generator consistency and fidelity against decay
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.hilbert import SpaceLayout
from app.core.numkit import liouvillian_matrix, min_eigenvalue, unvec, vec
from app.core.params import DecayRates
from app.services.dissipation_service import (
    SCENARIOS,
    DissipationScenario,
    chi_sweep,
    dissipative_fidelity,
    evolve_protocol,
    lindblad_channels,
    lindblad_generator,
    scenario_by_name,
)
from app.services.protocol_service import build_protocol


class TestScenarios:
    def test_names(self):
        assert [s.name for s in SCENARIOS] == [
            "equal",
            "cavity-weak",
            "atom-weak",
            "mixed-a",
            "mixed-a-mirror",
            "mixed-b",
            "mixed-b-mirror",
        ]

    def test_rates(self):
        rates = scenario_by_name("mixed-a").rates(0.2)
        assert (rates.kappaA, rates.kappaB, rates.gamma) == pytest.approx((0.02, 0.1, 0.2))

    def test_unknown(self):
        with pytest.raises(InvalidParameterError):
            scenario_by_name("hot")

    def test_multipliers_positive(self):
        with pytest.raises(InvalidParameterError):
            DissipationScenario("broken", 1, 0, 1)


class TestChannels:
    def test_counts(self, layout_n2):
        assert len(lindblad_channels(DecayRates(kappaA=0.1, kappaB=0.1, gamma=0.1), layout_n2)) == 4
        assert len(lindblad_channels(DecayRates(kappaA=0.1), layout_n2)) == 1
        assert lindblad_channels(DecayRates(), layout_n2) == []

    def test_qubit_register_has_no_mode_channels(self):
        channels = lindblad_channels(DecayRates(kappaA=1.0, kappaB=1.0, gamma=0.5), SpaceLayout.qubits(3))
        assert len(channels) == 3

    def test_generator_matches_liouvillian(self, layout_n1, random_density):
        spec = build_protocol("w3-hybrid")
        rates = DecayRates(kappaA=0.3, kappaB=0.1, gamma=0.2)
        rho = random_density(layout_n1.total_dim)
        h = spec.hamiltonian()
        lmat = liouvillian_matrix(h, lindblad_channels(rates, layout_n1))
        assert_allclose(
            lindblad_generator(h, rates, layout_n1)(rho), unvec(lmat @ vec(rho), layout_n1.total_dim), atol=1e-12
        )

    def test_generator_is_trace_preserving(self, layout_n1, random_density):
        h = build_protocol("bell-modes").hamiltonian()
        out = lindblad_generator(h, DecayRates(kappaA=1, kappaB=2, gamma=3), layout_n1)(random_density(8))
        assert abs(np.trace(out)) < 1e-12

    def test_generator_checks_shape(self, layout_n2):
        with pytest.raises(DimensionMismatchError):
            lindblad_generator(np.eye(8), DecayRates(), layout_n2)


class TestFidelity:
    @pytest.mark.parametrize("name", ["bell-modes", "w3-hybrid", "wt-hybrid", "ghz3", "cluster4"])
    def test_no_decay_is_perfect(self, name):
        assert dissipative_fidelity(build_protocol(name), DecayRates()) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("name", ["bell-modes", "w3-hybrid", "wt-hybrid", "w-dispersive", "wN-dispersive"])
    @pytest.mark.parametrize("chi", [0.05, 0.2])
    def test_equal_rates_decay_single_excitation(self, name, chi):
        # a single excitation leaks to the ground state at rate chi whichever subsystem holds it
        spec = build_protocol(name)
        expected = math.exp(-chi * spec.ideal_time / 2)
        assert dissipative_fidelity(spec, scenario_by_name("equal").rates(chi)) == pytest.approx(expected, abs=1e-9)

    def test_dispersive_ignores_cavity_rates(self):
        spec = build_protocol("ghz3")
        cavity_only = dissipative_fidelity(spec, DecayRates(kappaA=0.5, kappaB=0.5))
        assert cavity_only == pytest.approx(1.0, abs=1e-9)

    def test_final_state_is_physical(self):
        rho = evolve_protocol(build_protocol("wt-hybrid"), DecayRates(kappaA=0.3, kappaB=0.1, gamma=0.2))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert min_eigenvalue(rho) > -1e-12

    def test_rk4_agrees_with_exact(self):
        spec = build_protocol("w3-hybrid")
        rates = DecayRates(kappaA=0.2, kappaB=0.05, gamma=0.1)
        assert dissipative_fidelity(spec, rates, "rk4") == pytest.approx(dissipative_fidelity(spec, rates), abs=1e-8)

    def test_unknown_method(self):
        with pytest.raises(InvalidParameterError):
            evolve_protocol(build_protocol("bell-modes"), DecayRates(), method="euler")

    def test_ghz_decays_faster_than_w(self):
        rates = DecayRates(gamma=0.1)
        assert dissipative_fidelity(build_protocol("ghz3"), rates) < dissipative_fidelity(
            build_protocol("w-dispersive"), rates
        )


class TestChiSweep:
    def test_columns_and_monotone(self):
        result = chi_sweep(build_protocol("bell-modes"), scenario_by_name("cavity-weak"), [0.0, 0.1, 0.2])
        frame = result.to_frame()
        assert list(frame.columns) == ["chi_over_unit", "scenario", "protocol", "fidelity"]
        assert frame["fidelity"].iloc[0] == pytest.approx(1.0, abs=1e-9)
        assert frame["fidelity"].is_monotonic_decreasing

    def test_threads_do_not_change_values(self):
        spec = build_protocol("w3-hybrid")
        grid = [0.0, 0.05, 0.1, 0.15]
        inline = chi_sweep(spec, scenario_by_name("mixed-b"), grid)
        threaded = chi_sweep(spec, scenario_by_name("mixed-b"), grid, max_workers=3)
        assert threaded.column("fidelity") == pytest.approx(inline.column("fidelity"), abs=1e-14)

    def test_rejects_bad_grid(self):
        with pytest.raises(InvalidParameterError):
            chi_sweep(build_protocol("bell-modes"), scenario_by_name("equal"), [0.2, 0.1])
