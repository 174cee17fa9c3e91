# File: backend/app/utils/validation.py
# Purpose: Validation helpers for sweep grids and comma-separated CLI lists
import math
from typing import Iterable

import structlog

from app.core.errors import InvalidParameterError

logger = structlog.get_logger(__name__)


class GridValidator:
    """
    Validation utilities for parameter grids.
    """

    @staticmethod
    def validate(grid: Iterable[float], name: str = "grid") -> list[float]:
        """
        Check that a grid is non-empty, finite, non-negative and strictly increasing.

        Args:
            grid: Candidate grid values
            name: Label used in error messages

        Returns:
            The grid as a list of floats
        """
        values = [float(x) for x in grid]
        if not values:
            raise InvalidParameterError(f"{name} must not be empty")
        if any(x < 0 or not math.isfinite(x) for x in values):
            raise InvalidParameterError(f"{name} values must be finite and non-negative, got {values}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise InvalidParameterError(f"{name} must be strictly increasing, got {values}")
        return values

    @staticmethod
    def uniform(maximum: float, step: float) -> list[float]:
        """
        Grid 0, step, 2 step, ... up to and including ``maximum`` when it lies on the lattice.

        Values are rounded to 12 decimals so that repeated runs print identical grids.
        """
        if step <= 0 or maximum < 0 or not math.isfinite(maximum):
            raise InvalidParameterError(f"grid needs step > 0 and max >= 0, got step={step}, max={maximum}")
        count = int(math.floor(maximum / step + 1e-9))
        return [round(i * step, 12) for i in range(count + 1)]

    @staticmethod
    def parse_list(text: str, name: str = "list") -> list[float]:
        """Parse ``"0,2.5,5"`` into floats."""
        try:
            values = [float(part) for part in text.split(",") if part.strip()]
        except ValueError:
            logger.warning("grid_parse_failed", name=name, text=text)
            raise InvalidParameterError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None
        return values

