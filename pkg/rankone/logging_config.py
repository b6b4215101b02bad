"""
Logging setup.

Diagnostics go to stderr so stdout stays reserved for reports. The JSON
formatter comes from python-json-logger; ``log_format="text"`` switches to a
plain formatter for interactive use.
"""

import logging
import sys
from typing import Optional

from pythonjsonlogger import jsonlogger

from rankone.config import Settings, settings

_HANDLER_NAME = "rankone-stderr"


def configure_logging(config: Optional[Settings] = None) -> logging.Logger:
    """
    Attach a single stderr handler to the ``rankone`` logger.

    Calling this repeatedly replaces the handler instead of stacking new ones.

    Args:
        config: Settings to read ``log_level`` and ``log_format`` from.

    Returns:
        logging.Logger: The configured package logger.
    """
    config = config or settings
    logger = logging.getLogger("rankone")
    for handler in list(logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    if config.log_format == "json":
        handler.setFormatter(
            jsonlogger.JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
        )
    else:
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)-8s %(name)s: %(message)s")
        )

    logger.addHandler(handler)
    logger.setLevel(config.log_level)
    return logger
