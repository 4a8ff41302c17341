# SPDX-License-Identifier: Apache-2.0

"""Primary Logging Configuration Function
"""

import logging
import os
import sys

LOG_LEVEL_ENV = "EPRSIM_LOG_LEVEL"
_CONFIGURED_LOGGERS = set()


def configure_logger(logger_name):
    """Configures a generic logger which can be imported and used as needed.

    The handler writes to stderr, the report stream is never touched by
    logging.
    """

    logger = logging.getLogger(logger_name)
    logger.setLevel(os.environ.get(LOG_LEVEL_ENV, "INFO").upper())
    logger.propagate = False

    # Modules may be imported under several test runners, attach once
    if logger_name in _CONFIGURED_LOGGERS:
        return logger

    formatter = logging.Formatter(
        '%(asctime)s | %(levelname)s | %(name)s | %(message)s '
        '| (%(filename)s:%(lineno)d)',
    )
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)
    _CONFIGURED_LOGGERS.add(logger_name)

    return logger


def set_verbose():
    """Raise every logger created through configure_logger to DEBUG."""
    for logger_name in _CONFIGURED_LOGGERS:
        logging.getLogger(logger_name).setLevel(logging.DEBUG)
