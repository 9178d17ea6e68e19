# logging_config.py
import logging

import coloredlogs

from config.config import LOGGING_LEVEL

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# python-dotenv parses problem files; numexpr announces its thread pool on import
NOISY_LOGGERS = ("dotenv", "numexpr", "humanfriendly")


def setup_logging(level: str = LOGGING_LEVEL):
    coloredlogs.install(level=level, fmt=LOG_FORMAT)

    # Set specific logging levels for noisy libraries
    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    # Route numpy/scipy warnings (overflow, IntegrationWarning) through logging
    logging.captureWarnings(True)
    logging.getLogger("py.warnings").setLevel(logging.WARNING)
