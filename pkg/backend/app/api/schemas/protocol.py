# File: backend/app/api/schemas/protocol.py
# Purpose: Pydantic schema for building a named generation protocol
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class ProtocolRequest(BaseModel):
    """Knobs accepted by every protocol builder; unset fields fall back to the protocol's defaults"""
    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"name": "wN-prototype", "n": 5, "p_kind": "real"},
        },
    )

    name: str = Field(..., min_length=1, description="Catalog name of the protocol")
    omega: float = Field(1.0, gt=0, description="Coupling Omega, the resonant unit")
    delta_over_omega: Optional[float] = Field(None, ge=0, description="Detuning in units of Omega")
    nmax: int = Field(1, ge=1, description="Fock truncation per mode")
    n: Optional[int] = Field(None, ge=1, description="Number of qubits where the protocol is N-generic")
    p_up: Optional[float] = Field(None, ge=0, le=1, description="Target up probability of qubit 1")
    p_kind: Literal["real", "imaginary"] = Field("real", description="Bell-priming parameter kind")
    lam: float = Field(1.0, gt=0, description="Effective coupling lambda, the dispersive unit")
