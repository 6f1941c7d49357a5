import itertools
import math
import numpy as np
import pytest
from numpy.testing import assert_allclose
from errors import InvalidInputError
from experiments.ensembles import random_density_matrix
from experiments.dual_node import amplitude_sources
from physics.channels import depolarized_singlet, singlet
from physics.network import (
    conditional_states,
    conditional_states4,
    correlators3,
    correlators3_from_operators,
    correlators4,
    correlators4_from_probabilities,
    joint_prob3,
    joint_prob3_all,
    scenario3,
    scenario4,
    two_party_correlations,
)
from physics.linalg import expectation
from physics.quantum import PAULIS, AxisTriad, DensityMatrix, bloch_pure_state, bloch_vector, ejm_components
from physics.witnesses import (
    COMPONENT_PAIRS,
    NOISELESS_NCHSH4,
    amplitude_chain_correlators,
    nchsh3_lhs,
    nchsh4_lhs,
    ppt_min_eigenvalue,
)


def levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) / 2


def random_scenario(rng):
    return scenario3(
        random_density_matrix(4, 4, rng, dims=(2, 2)),
        random_density_matrix(4, 4, rng, dims=(2, 2)),
        rng.uniform(0, 2 * math.pi),
        AxisTriad.random(rng),
        AxisTriad.random(rng),
    )


def qubit(vector):
    return np.outer(vector, np.conj(vector))


def product_source(first, second):
    return DensityMatrix(matrix=np.kron(first, second), dims=(2, 2))


def test_noiseless_inequality_over_angles():
    for theta in np.linspace(0, 2 * math.pi, 50):
        lhs = nchsh3_lhs(correlators3(scenario3(singlet(), singlet(), theta))).lhs
        assert lhs == pytest.approx(3 * math.sqrt(1 + math.sin(theta) ** 2), abs=1e-9)


@pytest.mark.parametrize("theta", [math.pi / 2, math.pi / 3, 0.4])
def test_singlet_correlators(theta):
    table = correlators3(scenario3(singlet(), singlet(), theta))
    for x, k, y in itertools.product(range(3), repeat=3):
        expected = -0.5 * abs(levi_civita(x, k, y)) + 0.5 * math.sin(theta) * levi_civita(x, y, k)
        assert table.three_body[x, k, y] == pytest.approx(expected, abs=1e-10)
    assert_allclose(table.two_body_ac, -math.cos(theta) / 2 * np.eye(3), atol=1e-10)
    assert_allclose(table.two_body_bc, math.cos(theta) / 2 * np.eye(3), atol=1e-10)
    assert_allclose(table.two_body_ab, np.zeros((3, 3)), atol=1e-10)


def test_probabilities_normalized_and_no_signaling(rng):
    for _ in range(50):
        p = joint_prob3_all(random_scenario(rng))
        assert_allclose(p.sum(axis=(2, 3, 4)), np.ones((3, 3)), atol=1e-10)
        alice = p.sum(axis=(3, 4))
        bob = p.sum(axis=(2, 3))
        assert_allclose(alice, alice[:, :1, :].repeat(3, axis=1), atol=1e-10)
        assert_allclose(bob, bob[:1].repeat(3, axis=0), atol=1e-10)


def test_correlators_agree_between_methods(rng):
    for _ in range(20):
        s = random_scenario(rng)
        assert_allclose(correlators3(s).entries(), correlators3_from_operators(s).entries(), atol=1e-10)


def test_joint_prob3_checks_settings(singlet_scenario):
    assert joint_prob3(singlet_scenario, 1, 3).shape == (2, 4, 2)
    with pytest.raises(InvalidInputError):
        joint_prob3(singlet_scenario, 0, 1)


def test_product_sources_factorize(rng):
    for _ in range(200):
        sources = [random_density_matrix(2, 2, rng).matrix for _ in range(4)]
        s = scenario3(
            product_source(sources[0], sources[1]),
            product_source(sources[2], sources[3]),
            rng.uniform(0, 2 * math.pi),
            AxisTriad.random(rng),
            AxisTriad.random(rng),
        )
        table = correlators3(s)
        expected = np.einsum("x,k,y->xky", table.one_body_a, table.one_body_c, table.one_body_b)
        assert_allclose(table.three_body, expected, atol=1e-10)
        assert nchsh3_lhs(table).lhs <= 6 + 1e-9


def test_product_sources_can_exceed_two_at_theta_zero():
    plus = qubit(np.array([1, 1]) / math.sqrt(2))
    s = scenario3(
        product_source(plus, qubit(bloch_pure_state(2, 1))),
        product_source(plus, qubit(bloch_pure_state(2, -1))),
        0.0,
    )
    table = correlators3(s)
    assert table.one_body_c[0] > 0.9
    assert 2 < nchsh3_lhs(table).lhs <= 6


def test_relabeling_moves_table_entries(rng):
    s = random_scenario(rng)
    order, signs = [2, 0, 1], np.array([1.0, -1.0, -1.0])
    relabeled = scenario3(
        s.rho_ac, s.rho_bc, s.ejm.theta, s.alice_triad.permuted(order).flipped(signs), s.bob_triad)
    before, after = correlators3(s), correlators3(relabeled)
    assert_allclose(after.three_body, signs[:, None, None] * before.three_body[order], atol=1e-10)
    assert_allclose(after.one_body_a, signs * before.one_body_a[order], atol=1e-10)
    assert_allclose(after.two_body_bc, before.two_body_bc, atol=1e-10)


class TestConditionalStates:
    def test_swapped_singlets_are_maximally_entangled(self, singlet_scenario):
        assemblage = conditional_states(singlet_scenario)
        assert_allclose(assemblage.probabilities(), np.full(4, 0.25), atol=1e-12)
        for outcome in assemblage.outcomes:
            assert outcome.state.is_pure()
            assert ppt_min_eigenvalue(outcome.state) == pytest.approx(-0.5, abs=1e-10)

    def test_mixture_is_product_of_marginals(self, rng):
        s = random_scenario(rng)
        expected = np.kron(s.rho_ac.reduce([0]).matrix, s.rho_bc.reduce([0]).matrix)
        assert_allclose(conditional_states(s).mixture(), expected, atol=1e-10)

    def test_noisy_singlets_lose_entanglement(self):
        s = scenario3(depolarized_singlet(0.9), depolarized_singlet(0.9))
        assert all(ppt_min_eigenvalue(o.state) > 0 for o in conditional_states(s).outcomes)

    def test_product_sources_leave_end_states_untouched(self, rng):
        for _ in range(20):
            alice, relay, relay_prime, bob = (random_density_matrix(2, 2, rng).matrix for _ in range(4))
            s = scenario3(
                product_source(alice, relay),
                product_source(bob, relay_prime),
                rng.uniform(0, 2 * math.pi),
            )
            for outcome in conditional_states(s).outcomes:
                assert_allclose(outcome.state.matrix, np.kron(alice, bob), atol=1e-10)

    def test_chain_has_sixteen_outcomes(self):
        s = scenario4(singlet(), singlet(), singlet())
        assemblage = conditional_states4(s)
        assert len(assemblage.outcomes) == 16
        assert assemblage.outcomes[5].label == (2, 2)
        assert sum(assemblage.probabilities()) == pytest.approx(1.0)


class TestDualNode:
    def test_noiseless_value(self):
        table = correlators4(scenario4(singlet(), singlet(), singlet()))
        assert nchsh4_lhs(table).lhs == pytest.approx(NOISELESS_NCHSH4, abs=1e-9)

    def test_depolarized_correlator_pattern(self):
        v = (0.1, 0.25, 0.4)
        table = correlators4(scenario4(*(depolarized_singlet(x) for x in v)))
        survival = (1 - v[0]) * (1 - v[1]) * (1 - v[2])
        nonzero = {(0, 1, 0, 1), (1, 2, 1, 2), (2, 0, 2, 0)}
        for index in itertools.product(range(3), repeat=4):
            expected = survival if index in nonzero else 0.0
            assert abs(table.four_body[index]) == pytest.approx(expected, abs=1e-10)

    def test_probability_route_agrees(self, rng):
        s = scenario4(
            random_density_matrix(4, 2, rng, dims=(2, 2)),
            random_density_matrix(4, 2, rng, dims=(2, 2)),
            random_density_matrix(4, 2, rng, dims=(2, 2)),
            theta_c=0.7,
            theta_d=1.9,
            alice_triad=AxisTriad.random(rng),
        )
        assert_allclose(correlators4(s).four_body, correlators4_from_probabilities(s).four_body, atol=1e-10)


def test_two_party_correlations_of_singlet():
    assert_allclose(two_party_correlations(singlet(), PAULIS, PAULIS), -np.eye(3), atol=1e-12)


def pair_sum(v):
    return sum(abs(v[m] + sign * v[n]) for m, n, sign in COMPONENT_PAIRS)


def test_chain_of_product_sources_stays_below_bound(rng):
    for _ in range(50):
        a, c, c_prime, d, d_prime, b = (random_density_matrix(2, 2, rng).matrix for _ in range(6))
        s = scenario4(product_source(a, c), product_source(c_prime, d), product_source(d_prime, b))
        table = correlators4(s)
        relay_c = np.array([expectation(obs, np.kron(c, c_prime)) for obs in ejm_components(s.ejm_c)])
        relay_d = np.array([expectation(obs, np.kron(d, d_prime)) for obs in ejm_components(s.ejm_d)])
        expected = np.einsum("x,k,l,y->xkly", bloch_vector(a), relay_c, relay_d, bloch_vector(b))
        assert_allclose(table.four_body, expected, atol=1e-10)
        assert pair_sum(relay_c) <= 2 + 1e-9
        assert pair_sum(relay_d) <= 2 + 1e-9
        lhs = nchsh4_lhs(table).lhs
        ceiling = np.linalg.norm(bloch_vector(a)) * np.linalg.norm(bloch_vector(b)) * pair_sum(relay_c) * pair_sum(relay_d)
        assert lhs == pytest.approx(ceiling, abs=1e-9)
        assert lhs <= 4 + 1e-9


@pytest.mark.parametrize("p", [(0.0, 0.0, 0.0), (0.3, 0.1, 0.5), (0.6, 0.2, 0.05)])
def test_amplitude_damped_chain_correlators(p):
    table = correlators4(scenario4(*amplitude_sources(*p)))
    u1, u2, u3 = amplitude_chain_correlators(*p)
    assert abs(table.four_body[0, 1, 0, 1]) == pytest.approx(abs(u1), abs=1e-10)
    assert abs(table.four_body[1, 2, 1, 2]) == pytest.approx(abs(u2), abs=1e-10)
    assert abs(table.four_body[2, 0, 2, 0]) == pytest.approx(abs(u3), abs=1e-10)
