# File: backend/app/services/result_exporter.py
# Purpose: Byte-reproducible CSV / JSON serialization of result tables with a provenance header
import io
import json
from pathlib import Path
from typing import Any, Literal, Optional, TextIO

import structlog

from app.api.schemas.config import UNITS, RunConfig
from app.api.schemas.sweep import SweepResult
from app.config import APP_VERSION

logger = structlog.get_logger(__name__)

OutputFormat = Literal["csv", "json"]
FLOAT_FORMAT = "%.17g"


def _dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


class ResultExporter:
    """
    Writes one SweepResult per file.

    The header records the tool version, the command, the fully resolved RunConfig, the seed
    and the unit conventions; re-running the command with that config reproduces the file.
    """

    def __init__(self, config: RunConfig, command: str, tool: str = "bimodal-sim") -> None:
        self.config = config
        self.command = command
        self.tool = tool

    def header(self, result: SweepResult) -> dict[str, Any]:
        return {
            "tool": f"{self.tool} {APP_VERSION}",
            "command": self.command,
            "config": self.config.echo(),
            "seed": result.seed if result.seed is not None else self.config.seed,
            "units": UNITS,
            "summary": result.summary,
        }

    def to_csv(self, result: SweepResult) -> str:
        buffer = io.StringIO()
        for key, value in self.header(result).items():
            text = value if isinstance(value, str) else _dumps(value)
            buffer.write(f"# {key}: {text}\n")
        result.to_frame().to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()

    def to_json(self, result: SweepResult) -> str:
        payload = {"header": self.header(result), "columns": result.columns, "rows": result.rows}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def render(self, result: SweepResult, fmt: Optional[OutputFormat] = None) -> str:
        fmt = fmt or self.config.format
        return self.to_json(result) if fmt == "json" else self.to_csv(result)

    def write(self, result: SweepResult, stream: TextIO, out: Optional[str] = None) -> None:
        """Write to ``out`` (LF line endings) or to ``stream`` when no path is configured."""
        text = self.render(result)
        target = out if out is not None else self.config.out
        if target:
            path = Path(target)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            logger.info("result_written", path=str(path), kind=result.kind, rows=len(result.rows))
        else:
            stream.write(text)
