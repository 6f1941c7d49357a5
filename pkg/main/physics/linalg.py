"""
Dense complex linear algebra on multi-qubit operators.

Matrices are plain complex128 numpy arrays; tensor factorizations are described
by a list of subsystem dimensions whose product is the matrix dimension.
"""
from typing import Iterable, Sequence
import numpy as np
from errors import InvalidInputError
from settings import tolerances


def as_matrix(m) -> np.ndarray:
    """
    Coerce to a square, finite complex matrix
    """
    array = np.asarray(m, dtype=complex)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
        raise InvalidInputError(f"Expected a non-empty square matrix, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError("Matrix contains NaN or Inf entries")
    return array


def check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise InvalidInputError(f"Invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != m.shape[0]:
        raise InvalidInputError(f"Subsystem dimensions {dims} do not multiply to {m.shape[0]}")
    return dims


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    result = np.eye(1, dtype=complex)
    for factor in factors:
        result = np.kron(result, as_matrix(factor))
    return result


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """
    Trace out every factor not in keep; kept factors stay in ascending order
    """
    m = as_matrix(m)
    dims = check_dims(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise InvalidInputError(f"Invalid keep set {keep} for {n} subsystems")

    tensor = m.reshape(dims + dims)
    remaining = n
    for index in reversed(range(n)):
        if index in keep:
            continue
        tensor = np.trace(tensor, axis1=index, axis2=index + remaining)
        remaining -= 1
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return tensor.reshape(kept_dim, kept_dim)


def partial_transpose(m, dims: Sequence[int], subsystem: int) -> np.ndarray:
    m = as_matrix(m)
    dims = check_dims(m, dims)
    n = len(dims)
    if not 0 <= subsystem < n:
        raise InvalidInputError(f"Invalid subsystem {subsystem} for {n} subsystems")
    tensor = m.reshape(dims + dims)
    tensor = np.swapaxes(tensor, subsystem, subsystem + n)
    return tensor.reshape(m.shape)


def permute_subsystems(m, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """
    Reorder tensor factors: factor perm[i] of the input becomes factor i of the output
    """
    m = as_matrix(m)
    dims = check_dims(m, dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise InvalidInputError(f"{perm} is not a permutation of {n} subsystems")
    tensor = m.reshape(dims + dims)
    tensor = tensor.transpose(perm + [p + n for p in perm])
    return tensor.reshape(m.shape)


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m) -> np.ndarray:
    """
    Ascending real eigenvalues of a Hermitian matrix.
    Raises InvalidInputError when max |m - m†| exceeds the Hermiticity tolerance.
    """
    m = as_matrix(m)
    error = hermiticity_error(m)
    if error > tolerances().herm:
        raise InvalidInputError(f"Matrix is not Hermitian (max |m - m†| = {error:.3e})")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def expectation(operator, rho) -> float:
    return float(np.real(np.trace(as_matrix(operator) @ as_matrix(rho))))
