"""
Seeded random sources for the random-state study.
"""
from typing import List, Optional, Sequence, Tuple
import numpy as np
from errors import InvalidInputError
from physics.quantum import DensityMatrix


def random_density_matrix(dim: int, rank: Optional[int] = None, rng: Optional[np.random.Generator] = None,
                          dims: Optional[Sequence[int]] = None) -> DensityMatrix:
    """
    ρ = GG†/Tr(GG†) with G a dim x rank matrix of standard complex Gaussian entries
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise InvalidInputError(f"rank must be in [1, {dim}], got {rank}")
    rng = rng if rng is not None else np.random.default_rng()
    dims = tuple(dims) if dims is not None else (dim,)
    if int(np.prod(dims)) != dim:
        raise InvalidInputError(f"Factor dimensions {dims} do not multiply to {dim}")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(matrix=rho / np.trace(rho).real, dims=dims)


def sample_generators(seed: int, count: int) -> List[np.random.Generator]:
    """
    One independent generator per sample index, so sample i does not depend on how many came before
    """
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def random_source_pair(rng: np.random.Generator, rank: int = 4) -> Tuple[DensityMatrix, DensityMatrix]:
    rho_ac = random_density_matrix(4, rank, rng, dims=(2, 2))
    rho_bc = random_density_matrix(4, rank, rng, dims=(2, 2))
    return rho_ac, rho_bc


def random_product_source(rng: np.random.Generator) -> DensityMatrix:
    """
    ρ_end ⊗ ρ_relay with both qubits pure and drawn from the rank-one Ginibre measure
    """
    end = random_density_matrix(2, 1, rng)
    relay = random_density_matrix(2, 1, rng)
    return DensityMatrix(matrix=np.kron(end.matrix, relay.matrix), dims=(2, 2))


def random_product_pair(rng: np.random.Generator) -> Tuple[DensityMatrix, DensityMatrix]:
    return random_product_source(rng), random_product_source(rng)
