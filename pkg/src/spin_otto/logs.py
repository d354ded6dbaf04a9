from __future__ import annotations

import logging

from .settings import get_settings

LOGGER_NAME = "spin_otto"


class StructuredFormatter(logging.Formatter):
    """Formatter that adds structured fields for stage and status."""

    def format(self, record: logging.LogRecord) -> str:
        stage = getattr(record, "stage", record.module)
        status = getattr(record, "status", "ok")
        return f"{record.levelname}: {record.getMessage()} | stage={stage} | status={status}"


def configure_logging(level: str | None = None) -> logging.Logger:
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel((level or get_settings().log_level).upper())
    if not any(isinstance(h.formatter, StructuredFormatter) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(StructuredFormatter())
        logger.addHandler(handler)
    return logger


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(f"{LOGGER_NAME}.{name}")
