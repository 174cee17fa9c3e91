# File: backend/app/core/params.py
# Purpose: Validated physical parameter models shared by the Hamiltonian builders and services
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator


class BimodalParams(BaseModel):
    """Quasi-resonant bimodal model: Omega, Delta = wA - w = w - wB, coupling signs s_k."""

    model_config = ConfigDict(frozen=True)

    Omega: float = Field(1.0, gt=0, description="Qubit-mode coupling rate")
    Delta: float = Field(0.0, description="Detuning wA - w = w - wB")
    signs: tuple[int, ...] = Field(..., min_length=1, description="Coupling signs s_k to mode B")
    nmax: int = Field(1, ge=1, description="Fock truncation per mode")

    @field_validator("signs")
    @classmethod
    def _check_signs(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(s not in (1, -1) for s in value):
            raise ValueError(f"coupling signs must be +1 or -1, got {value}")
        return value

    @property
    def N(self) -> int:
        return len(self.signs)


class EffectiveParams(BaseModel):
    """Dispersive effective model: lambda and coupling signs s_k."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(1.0, gt=0, alias="lambda", description="Effective qubit-qubit coupling")
    signs: tuple[int, ...] = Field(..., min_length=1)

    @field_validator("signs")
    @classmethod
    def _check_signs(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(s not in (1, -1) for s in value):
            raise ValueError(f"coupling signs must be +1 or -1, got {value}")
        return value

    @property
    def N(self) -> int:
        return len(self.signs)


class DecayRates(BaseModel):
    """Zero-temperature decay rates of mode A, mode B and each qubit."""

    model_config = ConfigDict(frozen=True)

    kappaA: float = Field(0.0, ge=0)
    kappaB: float = Field(0.0, ge=0)
    gamma: float = Field(0.0, ge=0)

    def scaled(self, factor: float) -> "DecayRates":
        return DecayRates(kappaA=self.kappaA * factor, kappaB=self.kappaB * factor, gamma=self.gamma * factor)

    @property
    def is_zero(self) -> bool:
        return self.kappaA == 0 and self.kappaB == 0 and self.gamma == 0


class JitterConfig(BaseModel):
    """Time-of-flight jitter Monte Carlo settings; sigma is a fraction of 1/lambda."""

    model_config = ConfigDict(frozen=True)

    sigma_fraction: float = Field(0.0, ge=0)
    reps: int = Field(3000, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    transit: Literal["fixed", "common-stop"] = "fixed"
