import logging
import re
import sys

# Foreground colors
RED = '\033[31m'
GREEN = '\033[32m'
YELLOW = '\033[33m'
BLUE = '\033[34m'
MAGENTA = '\033[35m'
CYAN = '\033[36m'
WHITE = '\033[37m'

# Background color
BG_BLACK = '\033[40m'
BG_BLUE = '\033[44m'

# Reset code to return to default color
RESET = '\033[0m'

ANSI_PATTERN = re.compile(r"\033\[[0-9;]*m")

_HANDLER_NAME = "steering-stdout"


def strip_colors(message: str) -> str:
    """Remove ANSI color codes, e.g. before a message is stored in a report."""
    return ANSI_PATTERN.sub("", message)


class PlainFormatter(logging.Formatter):
    def format(self, record):
        return strip_colors(super().format(record))


def _formatter(color: bool) -> logging.Formatter:
    formatter_class = logging.Formatter if color else PlainFormatter
    return formatter_class(
        "[%(asctime)s] [Steering] [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S %z",
    )


def init_logging(level: str = "INFO", color: bool = True):
    root = logging.getLogger()
    root.setLevel(level)

    for existing in root.handlers:
        if existing.get_name() == _HANDLER_NAME:
            existing.setLevel(level)
            existing.setFormatter(_formatter(color))
            return

    handler = logging.StreamHandler(sys.stdout)
    handler.set_name(_HANDLER_NAME)
    handler.setLevel(level)
    handler.setFormatter(_formatter(color))
    root.addHandler(handler)
