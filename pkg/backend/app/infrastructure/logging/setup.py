# File: backend/app/infrastructure/logging/setup.py
# Purpose: Structured logging to stderr (and optional rotating files) with structlog and python-json-logger
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional

import structlog
from pythonjsonlogger.json import JsonFormatter


def setup_logging(
    log_level: str = "WARNING",
    log_dir: str = "",
    app_name: str = "bimodal-sim",
    log_format: str = "json",
) -> structlog.BoundLogger:
    """
    Configure structlog over stdlib logging.

    Console output always goes to stderr so that tables written to stdout stay byte-identical
    between runs. File handlers (daily app log, size-rotated error log) are attached only when
    ``log_dir`` is given.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: Directory for log files; empty disables file logging
        app_name: Application name for logger identification and file names
        log_format: ``json`` or ``console`` rendering of structlog events

    Returns:
        Configured structlog logger instance
    """
    renderer = (
        structlog.dev.ConsoleRenderer(colors=False)
        if log_format == "console"
        else structlog.processors.JSONRenderer(sort_keys=True)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level.upper())
    root_logger.handlers.clear()

    json_formatter = JsonFormatter(
        "%(asctime)s %(name)s %(levelname)s %(message)s",
        rename_fields={"asctime": "timestamp", "levelname": "level", "name": "logger"},
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(json_formatter if log_format == "json" else logging.Formatter("%(message)s"))
    console_handler.setLevel(logging.DEBUG)
    root_logger.addHandler(console_handler)
    handlers = ["console"]

    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)

        app_handler = logging.handlers.TimedRotatingFileHandler(
            filename=log_path / f"{app_name}.log",
            when="midnight",
            interval=1,
            backupCount=30,
            encoding="utf-8",
        )
        app_handler.setFormatter(json_formatter)
        app_handler.setLevel(logging.INFO)
        app_handler.suffix = "%Y-%m-%d"
        root_logger.addHandler(app_handler)

        error_handler = logging.handlers.RotatingFileHandler(
            filename=log_path / f"{app_name}_error.log",
            maxBytes=10 * 1024 * 1024,
            backupCount=10,
            encoding="utf-8",
        )
        error_handler.setFormatter(json_formatter)
        error_handler.setLevel(logging.ERROR)
        root_logger.addHandler(error_handler)
        handlers += ["app_file", "error_file"]

    logger = structlog.get_logger(app_name)
    logger.debug("logging_initialized", log_level=log_level, log_dir=log_dir or None, handlers=handlers)
    return logger


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    return structlog.get_logger(name)
