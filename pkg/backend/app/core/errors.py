# File: backend/app/core/errors.py
# Purpose: Exception hierarchy shared by the simulation core, services and CLI
from typing import Optional


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""

    error_code: str = "simulation_error"
    exit_code: int = 1

    def to_dict(self) -> dict:
        return {"error": self.error_code, "message": str(self)}


class DimensionMismatchError(SimulationError):
    """Operator or state dimensions do not agree."""

    error_code = "dimension_mismatch"
    exit_code = 2


class InvalidParameterError(SimulationError):
    """A pre-condition on an input parameter is violated."""

    error_code = "invalid_parameter"
    exit_code = 2


class UnknownProtocolError(InvalidParameterError):
    error_code = "unknown_protocol"


class InfeasibleWindowError(SimulationError):
    """
    Requested parameters fall outside an admissible detuning/probability window.

    The admissible interval is carried verbatim so callers can surface it.
    """

    error_code = "infeasible_window"
    exit_code = 2

    def __init__(
        self,
        quantity: str,
        requested: float,
        lower: float,
        upper: float,
        detail: Optional[str] = None,
    ):
        self.quantity = quantity
        self.requested = requested
        self.lower = lower
        self.upper = upper
        message = f"{quantity}={requested:.12g} outside admissible interval [{lower:.12g}, {upper:.12g}]"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)

    def to_dict(self) -> dict:
        data = super().to_dict()
        data.update(
            {
                "quantity": self.quantity,
                "requested": self.requested,
                "lower": self.lower,
                "upper": self.upper,
            }
        )
        return data
