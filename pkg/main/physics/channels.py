"""
Noisy source states and the length-parametrized depolarizing channel.

Source states are two-qubit DensityMatrix objects. Parameters are validated
on entry and never clamped.
"""
import math
from typing import List, Optional

from typing_extensions import Self
import numpy as np
from pydantic import BaseModel, Field, model_validator
from errors import InvalidInputError
from physics.linalg import kron_all, partial_trace, permute_subsystems
from physics.quantum import IDENTITY, DensityMatrix

SINGLET_VECTOR = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidInputError(f"{name} must be in [0, 1], got {value}")
    return value


def singlet() -> DensityMatrix:
    return DensityMatrix.from_pure(SINGLET_VECTOR, (2, 2))


def depolarized_singlet(v: float) -> DensityMatrix:
    """
    (1-v)|φ⟩⟨φ| + v I/4
    """
    v = _check_unit_interval("v", v)
    matrix = (1 - v) * np.outer(SINGLET_VECTOR, SINGLET_VECTOR.conj()) + v * np.eye(4) / 4
    return DensityMatrix(matrix=matrix, dims=(2, 2))


def amplitude_damping_kraus(p: float) -> List[np.ndarray]:
    """
    K1 is the decay operator, K2 the no-decay operator.

    K1 = [[0, sqrt(p)], [0, 0]]
    K2 = [[1, 0], [0, sqrt(1 - p)]]
    """
    p = _check_unit_interval("p", p)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex)
    k2 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    return [k1, k2]


def is_trace_preserving(kraus: List[np.ndarray], tol: float = 1e-12) -> bool:
    total = sum(k.conj().T @ k for k in kraus)
    return bool(np.allclose(total, np.eye(total.shape[0]), atol=tol))


def apply_kraus(rho: DensityMatrix, kraus: List[np.ndarray], wire: int) -> DensityMatrix:
    """
    Apply a single-qubit Kraus map to one wire, identity on the others
    """
    _check_wire(rho, wire)
    result = np.zeros_like(rho.matrix)
    for k in kraus:
        factors = [k if index == wire else np.eye(d) for index, d in enumerate(rho.dims)]
        operator = kron_all(factors)
        result = result + operator @ rho.matrix @ operator.conj().T
    return DensityMatrix(matrix=result, dims=rho.dims)


def amplitude_damped_singlet(p: float) -> DensityMatrix:
    """
    Σ_j (I⊗K_j)|φ⟩⟨φ|(I⊗K_j)†; the second factor is the damped one
    """
    return apply_kraus(singlet(), amplitude_damping_kraus(p), wire=1)


def swap_halves(rho: DensityMatrix) -> DensityMatrix:
    return rho.permuted((1, 0))


def depolarizing_survival(alpha: float, l: float) -> float:
    """
    e^{-αl}, the weight of the untouched state after a channel of length l
    """
    alpha = float(alpha)
    l = float(l)
    if not alpha > 0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    if not l >= 0:
        raise InvalidInputError(f"Channel length must be non-negative, got {l}")
    return math.exp(-alpha * l)


def apply_depolarizing_channel(rho: DensityMatrix, wire: int, alpha: float, l: float) -> DensityMatrix:
    """
    e^{-αl} ρ + (1 - e^{-αl}) (I/2 on the wire) ⊗ (reduced state of the other wires)
    """
    _check_wire(rho, wire)
    survival = depolarizing_survival(alpha, l)
    if survival == 1.0:
        return rho
    n = len(rho.dims)
    rest = [index for index in range(n) if index != wire]
    if rest:
        reduced = partial_trace(rho.matrix, rho.dims, rest)
        mixed = np.kron(IDENTITY / 2, reduced)
        # factor 0 of mixed is the depolarized wire; move it back into place
        perm = list(range(1, wire + 1)) + [0] + list(range(wire + 1, n))
        mixed = permute_subsystems(mixed, [2] + [rho.dims[r] for r in rest], perm)
    else:
        mixed = IDENTITY / 2
    matrix = survival * rho.matrix + (1 - survival) * mixed
    return DensityMatrix(matrix=matrix, dims=rho.dims)


def _check_wire(rho: DensityMatrix, wire: int):
    if not isinstance(wire, (int, np.integer)) or not 0 <= wire < len(rho.dims):
        raise InvalidInputError(f"Wire {wire} is not a factor of a state with dims {rho.dims}")
    if rho.dims[wire] != 2:
        raise InvalidInputError(f"Wire {wire} is not a qubit (dimension {rho.dims[wire]})")


class NoiseParams(BaseModel):
    """
    Noise on one singlet source: depolarizing weight v, amplitude-damping decay p,
    or a depolarizing channel of length l with attenuation alpha
    """

    v: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Depolarizing mixing weight")
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Amplitude-damping decay probability")
    alpha: Optional[float] = Field(default=None, gt=0.0, description="Channel attenuation per unit length")
    l: Optional[float] = Field(default=None, ge=0.0, description="Channel length")

    @model_validator(mode="after")
    def check_family(self) -> Self:
        families = [self.v is not None, self.p is not None, self.alpha is not None or self.l is not None]
        if sum(families) != 1:
            raise ValueError("Exactly one of v, p or (alpha, l) must be given")
        if families[2] and (self.alpha is None or self.l is None):
            raise ValueError("A channel needs both alpha and l")
        return self

    def source(self, wire: int = 0) -> DensityMatrix:
        """
        The noisy singlet; for a channel, wire is the travelling qubit
        """
        if self.v is not None:
            return depolarized_singlet(self.v)
        if self.p is not None:
            return amplitude_damped_singlet(self.p)
        return apply_depolarizing_channel(singlet(), wire, self.alpha, self.l)
