import logging
from log_utils import BG_BLACK, BLUE, CYAN, GREEN, MAGENTA, RED, RESET, WHITE, YELLOW


class Experiment:
    """
    An abstract superclass for experiment runners
    Used to log messages in a way that can identify each runner
    """

    RED = RED
    GREEN = GREEN
    YELLOW = YELLOW
    BLUE = BLUE
    MAGENTA = MAGENTA
    CYAN = CYAN
    WHITE = WHITE

    name: str = ""
    color: str = WHITE

    def __init__(self, show_progress: bool = True):
        self.show_progress = show_progress

    def log(self, message):
        """
        Log this as an info message, identifying the experiment
        """
        color_code = BG_BLACK + self.color
        message = f"[{self.name}] {message}"
        logging.info(color_code + message + RESET)
