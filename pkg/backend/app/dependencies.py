# File: backend/app/dependencies.py
# Purpose: Per-command context (settings, resolved run config, exporter, output stream) for the CLI handlers
import sys
from dataclasses import dataclass, field
from typing import Optional, TextIO

import structlog

from app.api.schemas.config import RunConfig
from app.api.schemas.sweep import SweepResult
from app.config import Settings, get_settings
from app.services.result_exporter import ResultExporter

logger = structlog.get_logger(__name__)


def get_app_settings() -> Settings:
    """
    Get application settings (singleton).

    Returns:
        Settings instance
    """
    return get_settings()


@dataclass
class CommandContext:
    """What a command handler needs besides its parsed arguments."""

    config: RunConfig
    command: str
    workers: int = 1
    stdout: TextIO = field(default_factory=lambda: sys.stdout)

    @property
    def exporter(self) -> ResultExporter:
        return ResultExporter(self.config, self.command)

    def emit(self, result: SweepResult, out: Optional[str] = None) -> None:
        self.exporter.write(result, self.stdout, out)


def build_context(
    command: str,
    config: RunConfig,
    workers: Optional[int] = None,
    stdout: Optional[TextIO] = None,
) -> CommandContext:
    settings = get_app_settings()
    resolved = workers if workers is not None else settings.MAX_WORKERS
    if resolved < 1:
        resolved = 1
    return CommandContext(config=config, command=command, workers=resolved, stdout=stdout or sys.stdout)
