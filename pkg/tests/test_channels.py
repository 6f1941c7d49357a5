import math
import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError
from errors import InvalidInputError
from physics.channels import (
    NoiseParams,
    amplitude_damped_singlet,
    amplitude_damping_kraus,
    apply_depolarizing_channel,
    depolarized_singlet,
    depolarizing_survival,
    is_trace_preserving,
    singlet,
    swap_halves,
)
from physics.quantum import DensityMatrix

ZERO = np.diag([1.0, 0.0]).astype(complex)


def test_depolarized_singlet_endpoints():
    assert_allclose(depolarized_singlet(0.0).matrix, singlet().matrix)
    assert_allclose(depolarized_singlet(1.0).matrix, np.eye(4) / 4)


@pytest.mark.parametrize("v", [-0.1, 1.5])
def test_depolarized_singlet_rejects_out_of_range(v):
    with pytest.raises(InvalidInputError):
        depolarized_singlet(v)


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_amplitude_damping_is_trace_preserving(p):
    assert is_trace_preserving(amplitude_damping_kraus(p))


def test_amplitude_damping_rejects_bad_probability():
    with pytest.raises(InvalidInputError):
        amplitude_damping_kraus(1.2)


def test_full_decay_leaves_damped_qubit_in_ground_state():
    rho = amplitude_damped_singlet(1.0)
    assert_allclose(rho.matrix, np.kron(np.eye(2) / 2, ZERO), atol=1e-12)


def test_no_decay_is_identity():
    assert_allclose(amplitude_damped_singlet(0.0).matrix, singlet().matrix, atol=1e-12)


def test_swap_halves():
    a = DensityMatrix(matrix=ZERO, dims=(2,))
    b = DensityMatrix.maximally_mixed((2,))
    joint = DensityMatrix(matrix=np.kron(a.matrix, b.matrix), dims=(2, 2))
    assert_allclose(swap_halves(joint).matrix, np.kron(b.matrix, a.matrix))


@pytest.mark.parametrize("wire", [0, 1])
def test_channel_on_singlet_is_white_noise(wire):
    alpha, length = 0.2, 1.7
    rho = apply_depolarizing_channel(singlet(), wire, alpha, length)
    expected = depolarized_singlet(1 - math.exp(-alpha * length))
    assert_allclose(rho.matrix, expected.matrix, atol=1e-12)


def test_channel_of_zero_length_is_identity():
    rho = apply_depolarizing_channel(singlet(), 1, 0.3, 0.0)
    assert_allclose(rho.matrix, singlet().matrix)


def test_channel_on_middle_wire_of_product():
    plus = np.full((2, 2), 0.5, dtype=complex)
    factors = [ZERO, plus, np.diag([0.25, 0.75]).astype(complex)]
    rho = DensityMatrix(matrix=np.kron(np.kron(*factors[:2]), factors[2]), dims=(2, 2, 2))
    survival = math.exp(-0.5)
    out = apply_depolarizing_channel(rho, 1, 0.5, 1.0)
    mixed = np.kron(np.kron(factors[0], np.eye(2) / 2), factors[2])
    assert_allclose(out.matrix, survival * rho.matrix + (1 - survival) * mixed, atol=1e-12)


def test_survival():
    assert depolarizing_survival(0.1, 0.0) == 1.0
    assert depolarizing_survival(0.1, math.inf) == 0.0
    with pytest.raises(InvalidInputError):
        depolarizing_survival(0.0, 1.0)
    with pytest.raises(InvalidInputError):
        depolarizing_survival(0.1, -1.0)


def test_channel_rejects_bad_wire():
    with pytest.raises(InvalidInputError):
        apply_depolarizing_channel(singlet(), 2, 0.1, 1.0)


class TestNoiseParams:
    def test_one_family_only(self):
        with pytest.raises(ValidationError):
            NoiseParams(v=0.1, p=0.2)
        with pytest.raises(ValidationError):
            NoiseParams()
        with pytest.raises(ValidationError):
            NoiseParams(alpha=0.1)

    def test_sources(self):
        assert_allclose(NoiseParams(v=0.3).source().matrix, depolarized_singlet(0.3).matrix)
        assert_allclose(NoiseParams(p=0.3).source().matrix, amplitude_damped_singlet(0.3).matrix)
        channel = NoiseParams(alpha=0.1, l=2.0).source(wire=1)
        assert_allclose(channel.matrix, depolarized_singlet(1 - math.exp(-0.2)).matrix, atol=1e-12)


@pytest.mark.parametrize("wire", [0, 1])
def test_channel_lengths_compose(rng, wire):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = DensityMatrix(matrix=g @ g.conj().T / np.trace(g @ g.conj().T).real, dims=(2, 2))
    twice = apply_depolarizing_channel(apply_depolarizing_channel(rho, wire, 0.3, 0.8), wire, 0.3, 1.9)
    once = apply_depolarizing_channel(rho, wire, 0.3, 2.7)
    assert_allclose(twice.matrix, once.matrix, atol=1e-12)
