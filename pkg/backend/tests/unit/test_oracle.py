# File: backend/tests/unit/test_oracle.py
# Purpose: Oracle families, the dispersive-regime validity check and the combined report.
import pytest

from app.core.errors import InvalidParameterError
from app.services.oracle_service import (
    VALIDITY_FLOOR,
    OracleSettings,
    dispersive_validity,
    get_oracle_registry,
    run_oracles,
)

AMPLITUDE_FAMILIES = ["single", "sequential", "simultaneous", "bell-primed", "dispersive-w", "ghz", "cluster"]


@pytest.mark.parametrize("family", AMPLITUDE_FAMILIES)
def test_family_passes(family):
    report = get_oracle_registry().get(family).run(OracleSettings(draws=5, seed=4))
    assert report.passed
    assert report.metric == "max_deviation"
    assert report.draws == 5


def test_family_is_seeded():
    family = get_oracle_registry().get("simultaneous")
    first = family.run(OracleSettings(draws=4, seed=11)).value
    again = family.run(OracleSettings(draws=4, seed=11)).value
    assert first == again


class TestDispersiveValidity:
    def test_deep_dispersive_regime(self):
        assert dispersive_validity(20.0) >= VALIDITY_FLOOR

    def test_improves_with_detuning(self):
        assert dispersive_validity(40.0) > dispersive_validity(20.0)

    def test_doubling_detuning_halves_infidelity(self):
        assert 1 - dispersive_validity(40.0) <= 0.5 * (1 - dispersive_validity(20.0))

    def test_literal_convention_misses_timing(self):
        assert dispersive_validity(20.0, convention="literal") < VALIDITY_FLOOR

    def test_rejects_non_positive_ratio(self):
        with pytest.raises(InvalidParameterError):
            dispersive_validity(0.0)


class TestRunOracles:
    def test_all_families(self):
        result = run_oracles(["all"], OracleSettings(draws=3))
        assert result.columns == ["family", "draws", "metric", "value", "threshold", "passed"]
        assert result.column("family") == get_oracle_registry().names()
        assert result.summary["passed"] is True

    def test_failing_family_fails_summary(self):
        result = run_oracles(["dispersive-validity"], OracleSettings(draws=1, convention="literal"))
        assert result.column("passed") == [False]
        assert result.summary["passed"] is False

    def test_unknown_family(self):
        with pytest.raises(InvalidParameterError):
            run_oracles(["quantum-magic"])

    def test_draws_must_be_positive(self):
        with pytest.raises(InvalidParameterError):
            run_oracles(["single"], OracleSettings(draws=0))
