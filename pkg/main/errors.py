"""
Exception hierarchy; each class carries the CLI exit code it maps to.
"""


class SteeringError(Exception):
    exit_code = 2


class InvalidInputError(SteeringError, ValueError):
    """Bad parameters, indices, non-Hermitian input or malformed scenario files"""

    exit_code = 1


class NumericalError(SteeringError, ArithmeticError):
    """A computed quantity broke one of its invariants"""

    exit_code = 2


class ReportIOError(SteeringError, OSError):
    exit_code = 3

    def __init__(self, path, reason):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")
