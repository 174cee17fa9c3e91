# File: backend/app/middleware/error_handler.py
# Purpose: Map exceptions raised by command handlers to exit codes and structured log events
import functools
import sys
from typing import Callable, TextIO

import structlog
from pydantic import ValidationError

from app.core.errors import InfeasibleWindowError, SimulationError

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2


def _format_validation_errors(errors: list) -> str:
    """Format Pydantic validation errors into a readable string"""
    messages = []
    for error in errors:
        loc = " -> ".join(str(x) for x in error["loc"])
        messages.append(f"{loc}: {error['msg']}" if loc else error["msg"])
    return "; ".join(messages)


def exit_code_for(exc: BaseException) -> int:
    """0 never; 2 for invalid or infeasible input; 1 for everything else."""
    if isinstance(exc, ValidationError):
        return EXIT_INVALID
    if isinstance(exc, SimulationError):
        return exc.exit_code
    return EXIT_INTERNAL


def report_error(exc: BaseException, stream: TextIO) -> int:
    """
    Log the exception, print a one-line message to ``stream`` and return the exit code.

    Args:
        exc: Exception raised by a command handler
        stream: Where the human-readable message goes (stderr in production)

    Returns:
        Process exit code
    """
    code = exit_code_for(exc)
    if isinstance(exc, InfeasibleWindowError):
        logger.warning("infeasible_window", **exc.to_dict())
        stream.write(
            f"error: {exc} (admissible {exc.quantity} in [{exc.lower:.12g}, {exc.upper:.12g}])\n"
        )
    elif isinstance(exc, ValidationError):
        message = _format_validation_errors(exc.errors())
        logger.warning("validation_error", errors=message)
        stream.write(f"error: invalid configuration: {message}\n")
    elif isinstance(exc, SimulationError):
        logger.warning("simulation_error", **exc.to_dict())
        stream.write(f"error: {exc}\n")
    else:
        logger.error("unhandled_exception", error=str(exc), error_type=type(exc).__name__, exc_info=True)
        stream.write(f"internal error: {type(exc).__name__}: {exc}\n")
    return code


def handle_command(func: Callable[..., int]) -> Callable[..., int]:
    """Decorator turning a command handler's exceptions into exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except Exception as exc:
            return report_error(exc, sys.stderr)

    return wrapper
