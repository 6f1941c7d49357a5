"""
Repeater-network states, outcome probabilities, correlator tables and the
conditional states left on Alice and Bob after the relays measure.

Wire layout is fixed: A, C, C', B for one relay and A, C, C', D, D', B for the
dual-node chain. Sources are permuted into this layout when the global state
is assembled. Spin outcome index 0 means +1 and index 1 means -1; EJM outcome
index c-1 means vertex c.
"""
from functools import cache
from typing import List, Optional, Tuple

from typing_extensions import Self
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from errors import InvalidInputError, NumericalError
from physics.channels import swap_halves
from physics.linalg import expectation
from physics.quantum import IDENTITY, AxisTriad, DensityMatrix, EjmBasis, ejm_basis, ejm_components
from settings import tolerances

SPIN_SIGNS = np.array([1.0, -1.0])


class Scenario3(BaseModel):
    """
    Single relay: Charlie shares rho_ac (A, C) with Alice and rho_bc (B, C') with Bob
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho_ac: DensityMatrix
    rho_bc: DensityMatrix
    ejm: EjmBasis
    alice_triad: AxisTriad = Field(default_factory=AxisTriad.pauli)
    bob_triad: AxisTriad = Field(default_factory=AxisTriad.pauli)

    @model_validator(mode="after")
    def check_sources(self) -> Self:
        _check_two_qubit("rho_ac", self.rho_ac)
        _check_two_qubit("rho_bc", self.rho_bc)
        return self


class Scenario4(BaseModel):
    """
    Dual-node chain: rho_ac (A, C), rho_cd (C', D), rho_db (D', B)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho_ac: DensityMatrix
    rho_cd: DensityMatrix
    rho_db: DensityMatrix
    ejm_c: EjmBasis
    ejm_d: EjmBasis
    alice_triad: AxisTriad = Field(default_factory=AxisTriad.pauli)
    bob_triad: AxisTriad = Field(default_factory=AxisTriad.pauli)

    @model_validator(mode="after")
    def check_sources(self) -> Self:
        for name in ("rho_ac", "rho_cd", "rho_db"):
            _check_two_qubit(name, getattr(self, name))
        return self


def _check_two_qubit(name: str, rho: DensityMatrix):
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"{name} must be a two-qubit state, got dims {rho.dims}")


def scenario3(rho_ac: DensityMatrix, rho_bc: DensityMatrix, theta: float = np.pi / 2,
              alice_triad: Optional[AxisTriad] = None, bob_triad: Optional[AxisTriad] = None) -> Scenario3:
    return Scenario3(
        rho_ac=rho_ac,
        rho_bc=rho_bc,
        ejm=ejm_basis(theta),
        alice_triad=alice_triad or AxisTriad.pauli(),
        bob_triad=bob_triad or AxisTriad.pauli(),
    )


def scenario4(rho_ac: DensityMatrix, rho_cd: DensityMatrix, rho_db: DensityMatrix,
              theta_c: float = np.pi / 2, theta_d: float = np.pi / 2,
              alice_triad: Optional[AxisTriad] = None, bob_triad: Optional[AxisTriad] = None) -> Scenario4:
    return Scenario4(
        rho_ac=rho_ac,
        rho_cd=rho_cd,
        rho_db=rho_db,
        ejm_c=ejm_basis(theta_c),
        ejm_d=ejm_basis(theta_d),
        alice_triad=alice_triad or AxisTriad.pauli(),
        bob_triad=bob_triad or AxisTriad.pauli(),
    )


class CorrelatorTable3(BaseModel):
    """
    Indices run 0..2 for x, k, y = 1..3
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    three_body: np.ndarray
    two_body_ac: np.ndarray
    two_body_bc: np.ndarray
    two_body_ab: np.ndarray
    one_body_a: np.ndarray
    one_body_b: np.ndarray
    one_body_c: np.ndarray

    @classmethod
    def zeros(cls) -> Self:
        return cls(
            three_body=np.zeros((3, 3, 3)),
            two_body_ac=np.zeros((3, 3)),
            two_body_bc=np.zeros((3, 3)),
            two_body_ab=np.zeros((3, 3)),
            one_body_a=np.zeros(3),
            one_body_b=np.zeros(3),
            one_body_c=np.zeros(3),
        )

    def entries(self) -> np.ndarray:
        return np.concatenate([np.ravel(getattr(self, name)) for name in type(self).model_fields])


class CorrelatorTable4(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    four_body: np.ndarray

    @classmethod
    def zeros(cls) -> Self:
        return cls(four_body=np.zeros((3, 3, 3, 3)))


class ConditionalState(BaseModel):
    """
    One relay outcome: its probability and the normalized state of Alice and Bob,
    or None when the outcome essentially never occurs
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: Tuple[int, ...]
    probability: float
    state: Optional[DensityMatrix] = None


class ConditionalAssemblage(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    outcomes: List[ConditionalState]

    @model_validator(mode="after")
    def check_normalized(self) -> Self:
        total = sum(outcome.probability for outcome in self.outcomes)
        if abs(total - 1.0) > tolerances().trace:
            raise ValueError(f"Outcome probabilities sum to {total:.12f}, expected 1")
        return self

    def probabilities(self) -> np.ndarray:
        return np.array([outcome.probability for outcome in self.outcomes])

    def mixture(self) -> np.ndarray:
        """Σ p(c) σ_c, the state of Alice and Bob ignoring the relay outcome"""
        return sum(o.probability * o.state.matrix for o in self.outcomes if o.state is not None)


def spin_projectors(triad: AxisTriad) -> np.ndarray:
    """
    Array (3, 2, 2, 2): [x, outcome, :, :] with outcome 0 for +1 and 1 for -1
    """
    return np.array([[(IDENTITY + obs) / 2, (IDENTITY - obs) / 2] for obs in triad.observables()])


def _with_identity(observables, dim: int) -> np.ndarray:
    return np.concatenate([np.eye(dim, dtype=complex)[None], np.asarray(observables)])


@cache
def _contraction_path(subscripts: str, *shapes) -> list:
    operands = [np.empty(shape, dtype=complex) for shape in shapes]
    return np.einsum_path(subscripts, *operands, optimize="greedy")[0]


def _contract(subscripts: str, *operands) -> np.ndarray:
    path = _contraction_path(subscripts, *(op.shape for op in operands))
    return np.einsum(subscripts, *operands, optimize=path)


def _clean_probabilities(table: np.ndarray, axes: Tuple[int, ...]) -> np.ndarray:
    table = np.real(table)
    tol = tolerances()
    worst = table.min()
    if worst < -tol.prob_clamp:
        raise NumericalError(f"Outcome probability {worst:.3e} is negative; the input state is invalid")
    table = np.where(table < 0, 0.0, table)
    return table / table.sum(axis=axes, keepdims=True)


def _check_table(name: str, values: np.ndarray):
    worst = float(np.max(np.abs(values))) if values.size else 0.0
    if worst > 1.0 + tolerances().table_slack:
        raise NumericalError(f"{name} has a correlator of magnitude {worst:.12f} > 1")


def _check_setting(name: str, value: int):
    if value not in (1, 2, 3):
        raise InvalidInputError(f"Measurement setting {name} must be 1..3, got {value}")


# Three-party network

def global_state3(s: Scenario3) -> DensityMatrix:
    """
    ρ_ac ⊗ ρ_bc with ρ_bc reordered from (B, C') to (C', B): wires A, C, C', B
    """
    matrix = np.kron(s.rho_ac.matrix, swap_halves(s.rho_bc).matrix)
    return DensityMatrix(matrix=matrix, dims=(2, 2, 2, 2))


def _state_tensor3(s: Scenario3) -> np.ndarray:
    # rows (a, cc', b), columns (a, cc', b)
    return global_state3(s).matrix.reshape(2, 4, 2, 2, 4, 2)


def joint_prob3_all(s: Scenario3) -> np.ndarray:
    """
    p(a, c, b | x, y) as an array indexed [x, y, a, c, b]
    """
    table = _contract(
        "xapq,crs,ybtu,qsuprt->xyacb",
        spin_projectors(s.alice_triad),
        s.ejm.projectors(),
        spin_projectors(s.bob_triad),
        _state_tensor3(s),
    )
    return _clean_probabilities(table, axes=(2, 3, 4))


def joint_prob3(s: Scenario3, x: int, y: int) -> np.ndarray:
    """
    p(a, c, b | x, y) indexed [a, c, b] for settings x, y in 1..3
    """
    _check_setting("x", x)
    _check_setting("y", y)
    return joint_prob3_all(s)[x - 1, y - 1]


def correlators_from_probabilities3(probabilities: np.ndarray, outcome_vectors: np.ndarray) -> CorrelatorTable3:
    signs_c = np.asarray(outcome_vectors, dtype=float)
    p = probabilities
    table = CorrelatorTable3(
        three_body=np.einsum("xyacb,a,ck,b->xky", p, SPIN_SIGNS, signs_c, SPIN_SIGNS),
        two_body_ac=np.einsum("xacb,a,ck->xk", p[:, 0], SPIN_SIGNS, signs_c),
        two_body_bc=np.einsum("yacb,b,ck->yk", p[0], SPIN_SIGNS, signs_c),
        two_body_ab=np.einsum("xyacb,a,b->xy", p, SPIN_SIGNS, SPIN_SIGNS),
        one_body_a=np.einsum("xacb,a->x", p[:, 0], SPIN_SIGNS),
        one_body_b=np.einsum("yacb,b->y", p[0], SPIN_SIGNS),
        one_body_c=np.einsum("acb,ck->k", p[0, 0], signs_c),
    )
    _check_table("CorrelatorTable3", table.entries())
    return table


def correlators3(s: Scenario3) -> CorrelatorTable3:
    """
    Every one-, two- and three-body correlator, from the outcome distribution
    """
    return correlators_from_probabilities3(joint_prob3_all(s), s.ejm.outcome_vectors)


def correlators3_from_operators(s: Scenario3) -> CorrelatorTable3:
    """
    Same table from Tr[(A_x ⊗ C^k ⊗ B_y) ρ]; index 0 of each operator stack is the identity
    """
    full = np.real(_contract(
        "xpq,krs,ytu,qsuprt->xky",
        _with_identity(s.alice_triad.observables(), 2),
        _with_identity(ejm_components(s.ejm), 4),
        _with_identity(s.bob_triad.observables(), 2),
        _state_tensor3(s),
    ))
    table = CorrelatorTable3(
        three_body=full[1:, 1:, 1:],
        two_body_ac=full[1:, 1:, 0],
        two_body_bc=full[0, 1:, 1:].T,
        two_body_ab=full[1:, 0, 1:],
        one_body_a=full[1:, 0, 0],
        one_body_b=full[0, 0, 1:],
        one_body_c=full[0, 1:, 0],
    )
    _check_table("CorrelatorTable3", table.entries())
    return table


def _normalize_outcomes(labels, subnormalized: np.ndarray) -> ConditionalAssemblage:
    tol = tolerances()
    outcomes = []
    for label, block in zip(labels, subnormalized):
        probability = float(np.trace(block).real)
        if probability > tol.null_state:
            state = DensityMatrix(matrix=block / probability, dims=(2, 2))
        else:
            state = None
        outcomes.append(ConditionalState(label=label, probability=max(probability, 0.0), state=state))
    return ConditionalAssemblage(outcomes=outcomes)


def conditional_states(s: Scenario3) -> ConditionalAssemblage:
    """
    σ_c = Tr_CC'[(1 ⊗ |Φ_c⟩⟨Φ_c| ⊗ 1) ρ] / p(c) on wires (A, B)
    """
    blocks = np.einsum("cik,akbdie->cabde", s.ejm.projectors(), _state_tensor3(s))
    labels = [(c,) for c in range(1, 5)]
    return _normalize_outcomes(labels, blocks.reshape(4, 4, 4))


# Dual-node chain

def global_state4(s: Scenario4) -> DensityMatrix:
    """
    ρ_ac ⊗ ρ_cd ⊗ ρ_db on wires A, C, C', D, D', B
    """
    matrix = np.kron(np.kron(s.rho_ac.matrix, s.rho_cd.matrix), s.rho_db.matrix)
    return DensityMatrix(matrix=matrix, dims=(2, 2, 2, 2, 2, 2))


def _state_tensor4(s: Scenario4) -> np.ndarray:
    # rows (a, cc', dd', b), columns likewise
    return global_state4(s).matrix.reshape(2, 4, 4, 2, 2, 4, 4, 2)


def _source_tensor(rho: DensityMatrix) -> np.ndarray:
    # indices (row first, row second, column first, column second)
    return rho.matrix.reshape(2, 2, 2, 2)


def correlators4(s: Scenario4) -> CorrelatorTable4:
    """
    four_body[x, k, l, y] = Tr[(A_x ⊗ C^k ⊗ D^l ⊗ B_y) ρ]

    Contracted source by source, so the 64x64 global state is never formed.
    """
    four_body = np.real(_contract(
        "xaA,kcgCG,ldhDH,ybB,ACac,GDgd,HBhb->xkly",
        np.asarray(s.alice_triad.observables()),
        ejm_components(s.ejm_c).reshape(3, 2, 2, 2, 2),
        ejm_components(s.ejm_d).reshape(3, 2, 2, 2, 2),
        np.asarray(s.bob_triad.observables()),
        _source_tensor(s.rho_ac),
        _source_tensor(s.rho_cd),
        _source_tensor(s.rho_db),
    ))
    _check_table("CorrelatorTable4", four_body)
    return CorrelatorTable4(four_body=four_body)


def joint_prob4(s: Scenario4, x: int, y: int) -> np.ndarray:
    """
    p(a, c, d, b | x, y) indexed [a, c, d, b]
    """
    _check_setting("x", x)
    _check_setting("y", y)
    table = _contract(
        "apq,crs,dtu,bvw,qsuwprtv->acdb",
        spin_projectors(s.alice_triad)[x - 1],
        s.ejm_c.projectors(),
        s.ejm_d.projectors(),
        spin_projectors(s.bob_triad)[y - 1],
        _state_tensor4(s),
    )
    return _clean_probabilities(table, axes=(0, 1, 2, 3))


def correlators4_from_probabilities(s: Scenario4) -> CorrelatorTable4:
    signs_c = np.asarray(s.ejm_c.outcome_vectors, dtype=float)
    signs_d = np.asarray(s.ejm_d.outcome_vectors, dtype=float)
    four_body = np.zeros((3, 3, 3, 3))
    for x in range(3):
        for y in range(3):
            p = joint_prob4(s, x + 1, y + 1)
            four_body[x, :, :, y] = np.einsum("acdb,a,ck,dl,b->kl", p, SPIN_SIGNS, signs_c, signs_d, SPIN_SIGNS)
    _check_table("CorrelatorTable4", four_body)
    return CorrelatorTable4(four_body=four_body)


def conditional_states4(s: Scenario4) -> ConditionalAssemblage:
    """
    σ_{c,d} on wires (A, B) for all 16 joint relay outcomes, labelled (c, d)
    """
    blocks = np.einsum(
        "cik,fjm,akmbdije->cfabde",
        s.ejm_c.projectors(),
        s.ejm_d.projectors(),
        _state_tensor4(s),
    )
    labels = [(c, d) for c in range(1, 5) for d in range(1, 5)]
    return _normalize_outcomes(labels, blocks.reshape(16, 4, 4))


# Two parties

def two_party_correlations(rho: DensityMatrix, alice_observables, bob_observables) -> np.ndarray:
    """
    ⟨A_i ⊗ B_j⟩ for the given lists of qubit observables
    """
    return np.array([
        [expectation(np.kron(a, b), rho.matrix) for b in bob_observables]
        for a in alice_observables
    ])
