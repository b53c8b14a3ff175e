"""
Logging setup shared by the library, the harness and the CLI.

Modules obtain their logger with ``structlog.get_logger(__name__)``; this
module only wires structlog onto the standard library's logging levels.
"""

import logging
import sys
from typing import Optional

import structlog

from config.settings import settings

_configured = False


def configure_logging(level: Optional[str] = None, json_output: Optional[bool] = None) -> None:
    """
    Configure structlog once for the whole process.

    Args:
        level: Log level name, defaults to the settings value
        json_output: Emit JSON lines instead of the console renderer
    """
    global _configured

    level_name = (level or settings.log_level).upper()
    use_json = settings.log_json if json_output is None else json_output

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level_name)

    renderer = (
        structlog.processors.JSONRenderer()
        if use_json
        else structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level_name)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    _configured = True


def is_configured() -> bool:
    """Whether configure_logging has run in this process."""
    return _configured
