# File: backend/app/api/schemas/config.py
# Purpose: Run configuration shared by every CLI command and echoed into every output header
import json
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.errors import InvalidParameterError

UNITS = "resonant rates and times in units of Omega; dispersive rates and times in units of lambda"


class RunConfig(BaseModel):
    """Every run-relevant knob; ambient settings (log level, worker count) are kept out"""
    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "delta_over_omega": 1.41421356,
                "sigma_pct": [0, 2.5, 5, 10],
                "reps": 3000,
                "seed": 7,
                "format": "csv",
            }
        },
    )

    omega: float = Field(1.0, gt=0, description="Coupling Omega, the resonant unit")
    delta_over_omega: Optional[float] = Field(None, ge=0, description="Detuning in units of Omega")
    nmax: int = Field(1, ge=1, description="Fock truncation per mode")
    n: Optional[int] = Field(None, ge=1, description="Qubit count for N-generic protocols")
    lam: float = Field(1.0, gt=0, description="Effective coupling lambda, the dispersive unit")
    p_up: Optional[float] = Field(None, ge=0, le=1, description="Qubit-1 up probability for wN-dispersive")
    p_kind: Literal["real", "imaginary"] = Field("real", description="Bell-priming parameter kind")

    method: Literal["exact", "rk4"] = Field("exact", description="Master-equation propagation method")

    seed: int = Field(0, ge=0, lt=2**64, description="Seed of the counter-based random stream")
    reps: int = Field(3000, ge=1, description="Monte Carlo repetitions per grid point")
    sigma_pct: list[float] = Field(
        default_factory=lambda: [0.0, 2.5, 5.0, 10.0], description="Jitter levels in percent of 1/lambda"
    )
    transit: Literal["fixed", "common-stop"] = Field("fixed", description="Transit model under jitter")
    gamma_over_lambda: float = Field(0.0, ge=0, description="Qubit decay applied during jitter sweeps")

    scenario: str = Field("equal", description="Dissipation scenario name")
    protocols: list[str] = Field(default_factory=list, description="Protocols swept; empty picks per-kind defaults")
    chi_max: float = Field(0.2, ge=0, description="Largest chi of the dissipation grid")
    gamma_over_lambda_max: float = Field(1.0, ge=0, description="Largest gamma/lambda of the SASA grid")
    grid_step: float = Field(0.05, gt=0, description="Spacing of the chi and gamma grids")

    draws: int = Field(100, ge=1, description="Random draws per oracle family")
    out: Optional[str] = Field(None, description="Output path; stdout when unset")
    format: Literal["csv", "json"] = Field("csv", description="Output format")

    @field_validator("sigma_pct")
    @classmethod
    def _check_sigma(cls, value: list[float]) -> list[float]:
        if any(v < 0 for v in value):
            raise ValueError(f"jitter percents must be non-negative, got {value}")
        return value

    @classmethod
    def resolve(
        cls,
        config_path: Optional[str] = None,
        overrides: Optional[dict[str, Any]] = None,
        defaults: Optional[dict[str, Any]] = None,
    ) -> "RunConfig":
        """
        Built-in defaults, then ``defaults``, then the JSON config file, then explicit overrides
        (``None`` values are skipped).

        Args:
            config_path: Optional JSON file with RunConfig keys
            overrides: Values given on the command line
            defaults: Process-level defaults such as the configured seed

        Returns:
            The validated configuration
        """
        data: dict[str, Any] = dict(defaults or {})
        if config_path:
            path = Path(config_path)
            try:
                loaded = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise InvalidParameterError(f"cannot read config file {config_path}: {exc}") from exc
            if not isinstance(loaded, dict):
                raise InvalidParameterError(f"config file {config_path} must hold a JSON object")
            data.update(loaded)
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.model_validate(data)

    def echo(self) -> dict[str, Any]:
        """JSON-ready copy for output headers."""
        return self.model_dump(mode="json")
