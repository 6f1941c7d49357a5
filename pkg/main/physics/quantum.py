"""
Physical building blocks: Pauli matrices, Bloch-vector qubit states, spin
observables along orthonormal triads, the generalized elegant joint
measurement (EJM) and validated density matrices.
"""
import logging
from typing import Sequence

from typing_extensions import Self
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from errors import InvalidInputError, NumericalError
from physics.linalg import (
    as_matrix,
    check_dims,
    expectation,
    hermiticity_error,
    partial_trace,
    permute_subsystems,
)
from settings import tolerances

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# Outcome vectors of the EJM, indexed c = 1..4 as rows 0..3
TETRAHEDRON = np.array(
    [
        [1, 1, 1],
        [1, -1, -1],
        [-1, 1, -1],
        [-1, -1, 1],
    ],
    dtype=int,
)


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class DensityMatrix(BaseModel):
    """
    A validated quantum state: Hermitian, unit trace, positive semidefinite,
    together with the dimensions of its tensor factors
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    dims: tuple[int, ...]

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value):
        return _read_only(as_matrix(value))

    @model_validator(mode="after")
    def check_state(self) -> Self:
        tol = tolerances()
        check_dims(self.matrix, self.dims)
        herm = hermiticity_error(self.matrix)
        if herm > tol.herm:
            raise ValueError(f"Density matrix is not Hermitian (max |m - m†| = {herm:.3e})")
        trace = np.trace(self.matrix).real
        if abs(trace - 1.0) > tol.trace:
            raise ValueError(f"Density matrix has trace {trace:.12f}, expected 1")
        smallest = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)[0]
        if smallest < -tol.psd:
            raise ValueError(f"Density matrix has negative eigenvalue {smallest:.3e}")
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, psi, dims: Sequence[int]) -> Self:
        psi = pure_state(psi)
        return cls(matrix=np.outer(psi, psi.conj()), dims=tuple(dims))

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> Self:
        dim = int(np.prod(dims))
        return cls(matrix=np.eye(dim, dtype=complex) / dim, dims=tuple(dims))

    @classmethod
    def from_printed(cls, matrix, dims: Sequence[int], label: str = "state") -> Self:
        """
        Build a state from a matrix printed with limited precision.
        The Hermitian part is taken, eigenvalues down to -fixture_repair are
        clipped to zero, and the result is renormalized to unit trace.
        """
        tol = tolerances()
        m = as_matrix(matrix)
        herm = hermiticity_error(m)
        if herm > tol.fixture_repair:
            raise InvalidInputError(f"{label}: printed matrix is not Hermitian (max |m - m†| = {herm:.3e})")
        m = (m + m.conj().T) / 2
        values, vectors = np.linalg.eigh(m)
        if values[0] < -tol.fixture_repair:
            raise InvalidInputError(f"{label}: eigenvalue {values[0]:.3e} is too negative to be a rounding artifact")
        if values[0] < -tol.psd:
            logging.warning(f"{label}: clipping eigenvalue {values[0]:.3e} from rounded input")
            values = np.clip(values, 0.0, None)
            m = (vectors * values) @ vectors.conj().T
        return cls(matrix=m / np.trace(m).real, dims=tuple(dims))

    def reduce(self, keep: Sequence[int]) -> Self:
        keep = sorted(set(keep))
        reduced = partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(matrix=reduced, dims=tuple(self.dims[k] for k in keep))

    def permuted(self, perm: Sequence[int]) -> Self:
        matrix = permute_subsystems(self.matrix, self.dims, perm)
        return DensityMatrix(matrix=matrix, dims=tuple(self.dims[p] for p in perm))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.eigenvalues()[-1] - 1.0) < tol


def pure_state(amplitudes) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tolerances().norm:
        raise InvalidInputError(f"State vector has norm {norm:.15f}, expected 1")
    return psi


def bloch_vector(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    array = np.asarray(rho, dtype=complex)
    if array.ndim == 1:
        array = np.outer(array, array.conj())
    if array.shape != (2, 2):
        raise InvalidInputError(f"Bloch vectors are defined for qubits, got shape {array.shape}")
    return np.array([np.trace(sigma @ array).real for sigma in PAULIS])


def tetra_vertices() -> np.ndarray:
    return TETRAHEDRON.copy()


def bloch_pure_state(c: int, sign: int = 1) -> np.ndarray:
    """
    |±m_c⟩: the qubit state whose Bloch vector is ±m_c/√3.
    η_c is the z component of the unit vector and φ_c the azimuth from atan2.
    """
    if c not in (1, 2, 3, 4):
        raise InvalidInputError(f"Vertex index must be 1..4, got {c}")
    if sign not in (1, -1):
        raise InvalidInputError(f"Sign must be +1 or -1, got {sign}")
    m = tetra_vertices()[c - 1]
    eta = m[2] / np.sqrt(3)
    phi = np.arctan2(m[1], m[0])
    up = np.sqrt((1 + sign * eta) / 2)
    down = np.sqrt((1 - sign * eta) / 2)
    return np.array([up * np.exp(-1j * phi / 2), sign * down * np.exp(1j * phi / 2)])


def spin_observable(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float).reshape(-1)
    if axis.shape != (3,):
        raise InvalidInputError(f"Axis must be a 3-vector, got shape {axis.shape}")
    norm = np.linalg.norm(axis)
    if abs(norm - 1.0) > tolerances().norm:
        raise InvalidInputError(f"Measurement axis must have unit norm, got {norm:.15f}")
    return sum(s * sigma for s, sigma in zip(axis, PAULIS))


class AxisTriad(BaseModel):
    """
    Three orthonormal measurement directions; row x holds s_x
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    axes: np.ndarray

    @field_validator("axes", mode="before")
    @classmethod
    def coerce_axes(cls, value):
        axes = np.asarray(value, dtype=float)
        if axes.shape != (3, 3):
            raise ValueError(f"A triad needs three 3-vectors, got shape {axes.shape}")
        gram = axes @ axes.T
        error = float(np.max(np.abs(gram - np.eye(3))))
        if error > tolerances().norm:
            raise ValueError(f"Triad is not orthonormal (max |s_i·s_j - δ_ij| = {error:.3e})")
        return _read_only(axes)

    @classmethod
    def pauli(cls) -> Self:
        return cls(axes=np.eye(3))

    @classmethod
    def random(cls, rng: np.random.Generator) -> Self:
        q, r = np.linalg.qr(rng.standard_normal((3, 3)))
        q = q * np.sign(np.diag(r))
        return cls(axes=q.T)

    def observables(self) -> list[np.ndarray]:
        return [spin_observable(axis) for axis in self.axes]

    def permuted(self, order: Sequence[int]) -> Self:
        return AxisTriad(axes=self.axes[list(order)])

    def flipped(self, signs: Sequence[int]) -> Self:
        return AxisTriad(axes=self.axes * np.asarray(signs, dtype=float)[:, None])


class EjmBasis(BaseModel):
    """
    The four states |Φ_c^θ⟩ (rows of states) with their outcome vectors
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta: float
    states: np.ndarray
    outcome_vectors: np.ndarray

    @model_validator(mode="after")
    def check_basis(self) -> Self:
        if self.states.shape != (4, 4):
            raise ValueError(f"EJM needs four 4-dimensional states, got {self.states.shape}")
        if not np.array_equal(self.outcome_vectors, TETRAHEDRON):
            raise ValueError("Outcome vectors must be the tetrahedron vertices in canonical order")
        gram = self.states.conj() @ self.states.T
        error = float(np.max(np.abs(gram - np.eye(4))))
        if error > 1e-10:
            raise NumericalError(f"EJM states are not orthonormal at θ={self.theta} (error {error:.3e})")
        return self

    def projectors(self) -> np.ndarray:
        """Array of shape (4, 4, 4): projector c at index c-1"""
        return np.einsum("ci,cj->cij", self.states, self.states.conj())

    def component(self, k: int) -> np.ndarray:
        return ejm_component_observable(self, k)


def ejm_basis(theta: float) -> EjmBasis:
    theta = float(theta)
    if not np.isfinite(theta):
        raise InvalidInputError(f"θ must be finite, got {theta}")
    phase = np.exp(1j * theta)
    weight_plus = (np.sqrt(3) + phase) / (2 * np.sqrt(2))
    weight_minus = (np.sqrt(3) - phase) / (2 * np.sqrt(2))
    states = []
    for c in range(1, 5):
        up = bloch_pure_state(c, 1)
        down = bloch_pure_state(c, -1)
        states.append(weight_plus * np.kron(up, down) + weight_minus * np.kron(down, up))
    return EjmBasis(
        theta=theta,
        states=_read_only(np.array(states)),
        outcome_vectors=_read_only(tetra_vertices()),
    )


def ejm_component_observable(basis: EjmBasis, k: int) -> np.ndarray:
    """
    C^k = Σ_c c^k |Φ_c⟩⟨Φ_c|
    """
    if k not in (1, 2, 3):
        raise InvalidInputError(f"Component index must be 1..3, got {k}")
    weights = basis.outcome_vectors[:, k - 1]
    return basis.states.T @ np.diag(weights.astype(complex)) @ basis.states.conj()


def ejm_components(basis: EjmBasis) -> np.ndarray:
    return np.array([ejm_component_observable(basis, k) for k in (1, 2, 3)])


def lemma1_sum(state, triad: AxisTriad) -> float:
    """
    ⟨A_1⟩² + ⟨A_2⟩² + ⟨A_3⟩² for a qubit state (vector or density matrix)
    """
    if isinstance(state, DensityMatrix):
        rho = state.matrix
    else:
        array = np.asarray(state, dtype=complex)
        rho = np.outer(array, array.conj()) if array.ndim == 1 else as_matrix(array)
    return float(sum(expectation(obs, rho) ** 2 for obs in triad.observables()))


def bell_basis() -> np.ndarray:
    """Rows: |Φ+⟩, |Φ-⟩, |Ψ+⟩, |Ψ-⟩"""
    s = 1 / np.sqrt(2)
    return np.array(
        [
            [s, 0, 0, s],
            [s, 0, 0, -s],
            [0, s, s, 0],
            [0, s, -s, 0],
        ],
        dtype=complex,
    )


def ejm_local_unitary() -> np.ndarray:
    """
    U = exp(i(2π/3) n·σ) with n = (1,1,1)/√3; (1⊗U) maps each EJM state at θ = π/2 onto a Bell state
    """
    n_sigma = sum(PAULIS) / np.sqrt(3)
    angle = 2 * np.pi / 3
    return np.cos(angle) * IDENTITY + 1j * np.sin(angle) * n_sigma
