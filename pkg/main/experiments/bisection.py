from typing import Callable
from pydantic import BaseModel

TOLERANCE = 1e-6
MAX_ITERATIONS = 60


class Threshold(BaseModel):
    """
    Where f changes from positive (violated) to non-positive
    """

    value: float
    lo: float
    hi: float
    iterations: int
    bracketed: bool


def bisect_threshold(f: Callable[[float], float], lo: float = 0.0, hi: float = 1.0,
                     tol: float = TOLERANCE, max_iterations: int = MAX_ITERATIONS) -> Threshold:
    """
    f is positive below the threshold and non-positive above it.
    Returns lo when f(lo) <= 0 and hi when f(hi) > 0; otherwise the midpoint
    of the final bracket.
    """
    if f(lo) <= 0:
        return Threshold(value=lo, lo=lo, hi=lo, iterations=0, bracketed=False)
    if f(hi) > 0:
        return Threshold(value=hi, lo=hi, hi=hi, iterations=0, bracketed=False)
    iterations = 0
    while hi - lo >= tol and iterations < max_iterations:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return Threshold(value=(lo + hi) / 2, lo=lo, hi=hi, iterations=iterations, bracketed=True)
