"""Logging setup shared by the CLI and the HTTP service"""
import logging
import sys
from typing import Optional, TextIO

from pythonjsonlogger import jsonlogger

from .config import settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(
    level: Optional[str] = None,
    json_format: Optional[bool] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """Install a single handler on the root logger (stderr by default)"""
    level_name = (level or ("DEBUG" if settings.debug else settings.log_level)).upper()
    use_json = settings.log_json if json_format is None else json_format

    handler = logging.StreamHandler(stream or sys.stderr)
    if use_json:
        handler.setFormatter(jsonlogger.JsonFormatter(LOG_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, level_name, logging.INFO))
