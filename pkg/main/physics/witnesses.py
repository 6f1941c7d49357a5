"""
Detection criteria evaluated on correlator tables and conditional states:
the network NCHSH-like inequalities (one and two relays), the two-party
CHSH-like steering inequality, the bilocal inequality and the PPT criterion.
"""
import itertools
import math
import numpy as np
from pydantic import BaseModel, Field
from physics.linalg import hermitian_eigenvalues, partial_transpose
from physics.network import ConditionalAssemblage, CorrelatorTable3, CorrelatorTable4
from physics.quantum import DensityMatrix
from settings import tolerances

NCHSH3_BOUND = 2.0
NCHSH4_BOUND = 4.0
CHSH_STEERING_BOUND = 2.0
NOISELESS_NCHSH4 = 6 + 3 * math.sqrt(2)

# (m, n, sign) for the combinations C^m + (-1)^m C^n, components zero-indexed
COMPONENT_PAIRS = ((0, 1, -1), (0, 2, -1), (1, 2, 1))

DISTINCT_TRIPLES = tuple(itertools.permutations(range(3)))


class WitnessVerdict(BaseModel):
    """
    Left-hand side of an inequality against its bound
    """

    lhs: float
    bound: float
    violated: bool
    terms: list[float] = Field(default_factory=list, description="The individual square-root blocks")

    @classmethod
    def judge(cls, terms, bound: float):
        terms = [float(term) for term in terms]
        lhs = float(sum(terms))
        return cls(lhs=lhs, bound=bound, violated=lhs > bound, terms=terms)

    @property
    def margin(self) -> float:
        return self.lhs - self.bound

    @property
    def inconclusive(self) -> bool:
        return abs(self.margin) < tolerances().borderline


class BilocalVerdict(BaseModel):
    S: float
    T: float
    Z: float
    B: float
    bound: float
    violated: bool


def nchsh3_lhs(t: CorrelatorTable3) -> WitnessVerdict:
    """
    √Σ⟨A_x(C²+C³)B_y⟩² + √Σ⟨A_x(C¹-C²)B_y⟩² + √Σ⟨A_x(C¹-C³)B_y⟩², bound 2
    """
    tb = t.three_body
    blocks = [
        tb[:, 1, :] + tb[:, 2, :],
        tb[:, 0, :] - tb[:, 1, :],
        tb[:, 0, :] - tb[:, 2, :],
    ]
    return WitnessVerdict.judge([np.linalg.norm(block) for block in blocks], NCHSH3_BOUND)


def nchsh4_lhs(t: CorrelatorTable4) -> WitnessVerdict:
    """
    Nine blocks, one per pair of combinations [C^m + (-1)^m C^n][D^p + (-1)^p D^q], bound 4
    """
    fb = t.four_body
    terms = []
    for m, n, sign_c in COMPONENT_PAIRS:
        for p, q, sign_d in COMPONENT_PAIRS:
            block = (
                fb[:, m, p, :]
                + sign_d * fb[:, m, q, :]
                + sign_c * fb[:, n, p, :]
                + sign_c * sign_d * fb[:, n, q, :]
            )
            terms.append(np.linalg.norm(block))
    return WitnessVerdict.judge(terms, NCHSH4_BOUND)


def chsh_steering_lhs(corr) -> WitnessVerdict:
    """
    corr[i, j] = ⟨A_i B_j⟩ for two settings each, bound 2
    """
    corr = np.asarray(corr, dtype=float)
    if corr.shape != (2, 2):
        raise ValueError(f"Expected a 2x2 correlation table, got shape {corr.shape}")
    plus = corr[0] + corr[1]
    minus = corr[0] - corr[1]
    return WitnessVerdict.judge([np.linalg.norm(plus), np.linalg.norm(minus)], CHSH_STEERING_BOUND)


def other_correlators(t: CorrelatorTable3) -> np.ndarray:
    """
    Everything S and T do not use: one-body terms, ⟨A_xB_y⟩, off-diagonal
    ⟨A_xC^k⟩ and ⟨B_yC^k⟩, and three-body terms with a repeated index
    """
    off_diagonal = ~np.eye(3, dtype=bool)
    repeated = np.ones((3, 3, 3), dtype=bool)
    for x, k, y in DISTINCT_TRIPLES:
        repeated[x, k, y] = False
    return np.concatenate([
        t.one_body_a,
        t.one_body_b,
        t.one_body_c,
        t.two_body_ab.ravel(),
        t.two_body_ac[off_diagonal],
        t.two_body_bc[off_diagonal],
        t.three_body[repeated],
    ])


def bilocal_test(t: CorrelatorTable3) -> BilocalVerdict:
    S = float(np.trace(t.two_body_bc) - np.trace(t.two_body_ac))
    T = float(sum(t.three_body[x, k, y] for x, k, y in DISTINCT_TRIPLES))
    Z = float(np.max(np.abs(other_correlators(t))))
    B = S / 3 - T
    bound = 3 + 5 * Z
    return BilocalVerdict(S=S, T=T, Z=Z, B=B, bound=bound, violated=B > bound)


def ppt_min_eigenvalue(rho: DensityMatrix) -> float:
    """
    Smallest eigenvalue of the partial transpose over the second qubit
    """
    transposed = partial_transpose(rho.matrix, rho.dims, 1)
    return float(hermitian_eigenvalues(transposed)[0])


def steering_by_entanglement(assemblage: ConditionalAssemblage) -> bool:
    threshold = tolerances().ppt_entangled
    return any(
        ppt_min_eigenvalue(outcome.state) < threshold
        for outcome in assemblage.outcomes
        if outcome.state is not None
    )


def min_ppt_over(assemblage: ConditionalAssemblage) -> float:
    return min(ppt_min_eigenvalue(o.state) for o in assemblage.outcomes if o.state is not None)


# Closed forms for the noise families, used as oracles by the experiments

def nchsh3_closed_form_depolarizing(v1: float, v2: float, theta: float) -> float:
    return 3 * (1 - v1) * (1 - v2) * math.sqrt(1 + math.sin(theta) ** 2)


def nchsh3_closed_form_amplitude(p1: float, p2: float) -> float:
    """Left side of the amplitude-damping violation condition at θ = π/2"""
    common = (1 - p1) * (1 - p2)
    return (
        math.sqrt(common * (2 - p1 - p2))
        + math.sqrt(common * (2 - p2))
        + math.sqrt(common * (2 - p1))
    )


def nchsh4_closed_form_depolarizing(v1: float, v2: float, v3: float) -> float:
    return NOISELESS_NCHSH4 * (1 - v1) * (1 - v2) * (1 - v3)


def amplitude_chain_correlators(p1: float, p2: float, p3: float) -> tuple[float, float, float]:
    """u1 = ⟨A₁C²D¹B₂⟩, u2 = ⟨A₂C³D²B₃⟩, u3 = ⟨A₃C¹D³B₁⟩ up to sign"""
    u1 = (1 - p2) * math.sqrt((1 - p1) * (1 - p3))
    u2 = (p3 - 1) * math.sqrt((1 - p1) * (1 - p2))
    u3 = (p1 - 1) * math.sqrt((1 - p2) * (1 - p3))
    return u1, u2, u3


def nchsh4_closed_form_amplitude(p1: float, p2: float, p3: float) -> float:
    u1, u2, u3 = amplitude_chain_correlators(p1, p2, p3)
    return (
        math.hypot(u1, u2)
        + math.hypot(u1, u3)
        + math.hypot(u2, u3)
        + 2 * (abs(u1) + abs(u2) + abs(u3))
    )


def bilocal_closed_form(v: float, theta: float) -> float:
    """B for two equally depolarized singlets"""
    return (1 - v) * math.cos(theta) + 3 * (1 - v) ** 2


def distance_bound(alpha: float) -> float:
    """Largest total length l1 + l2 (exclusive) that still violates the one-relay inequality"""
    return math.log(3 / math.sqrt(2)) / alpha
