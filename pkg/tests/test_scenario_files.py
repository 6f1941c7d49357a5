import json
import math
import numpy as np
import pytest
from numpy.testing import assert_allclose
from errors import InvalidInputError, ReportIOError
from experiments.sweeps import nchsh3_amplitude
from physics.channels import amplitude_damped_singlet, singlet, swap_halves
from physics.scenario_files import (
    ScenarioDocument,
    evaluate_document,
    fixture_path,
    list_fixtures,
    load_fixture,
    load_scenario_file,
    matrix_from_pairs,
    resolve_scenario3,
)


def pairs(matrix):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def document(rho_ac, rho_bc, bc_wires=("B", "C'"), **fields):
    return ScenarioDocument(
        name="test",
        sources={
            "ac": {"wires": ["A", "C"], "matrix": pairs(rho_ac)},
            "bc": {"wires": list(bc_wires) if bc_wires else None, "matrix": pairs(rho_bc)},
        },
        **fields,
    )


def test_bundled_fixtures():
    assert {"ppt_blind_1", "ppt_blind_2", "two_singlets", "product_state"} <= set(list_fixtures())
    with pytest.raises(InvalidInputError):
        fixture_path("nonexistent")


class TestPptBlindSources:
    @pytest.fixture(scope="class")
    def evaluation(self):
        return evaluate_document(load_fixture("ppt_blind_1"))

    def test_inequality_value(self, evaluation):
        assert evaluation.nchsh.lhs == pytest.approx(1.2647, abs=1e-3)
        assert not evaluation.nchsh.violated

    def test_printed_value_not_reached_by_either_reading(self, evaluation):
        published = load_fixture("ppt_blind_1").published.nchsh3
        assert published == pytest.approx(2.9628)
        assert all(abs(value - published) > 0.5 for value in evaluation.ordering.candidates.values())

    def test_no_entanglement_detected(self, evaluation):
        assert not evaluation.steering_by_entanglement
        assert evaluation.min_ppt_eigenvalue > -1e-8

    def test_first_conditional_spectrum(self, evaluation):
        expected = sorted(load_fixture("ppt_blind_1").expected.conditional_eigenvalues[0])
        assert_allclose(sorted(evaluation.conditional_eigenvalues[0]), expected, atol=2e-3)

    def test_ordering_is_logged(self, evaluation):
        ordering = evaluation.ordering
        target = load_fixture("ppt_blind_1").expected.nchsh3
        assert ordering is not None
        assert ordering.target == target
        assert set(ordering.candidates) == {"B,C'", "C',B"}
        chosen = ordering.candidates[ordering.chosen]
        assert all(abs(chosen - target) <= abs(value - target) for value in ordering.candidates.values())


def test_printed_conditional_state_disagrees_with_printed_spectrum():
    doc = load_fixture("ppt_blind_1")
    printed = matrix_from_pairs(doc.published.conditional_states[0])
    values = sorted(np.linalg.eigvalsh((printed + printed.conj().T) / 2))
    assert_allclose(values, [0.022058, 0.083418, 0.177788, 0.716737], atol=1e-3)
    listed = sorted(doc.published.conditional_eigenvalues[0])
    assert np.max(np.abs(np.array(values) - np.array(listed))) > 0.01


def test_ppt_blind_2_evaluates():
    evaluation = evaluate_document(load_fixture("ppt_blind_2"))
    assert len(evaluation.outcome_probabilities) == 4
    assert sum(evaluation.outcome_probabilities) == pytest.approx(1.0)
    assert evaluation.ordering is not None


def test_two_singlets_fixture():
    evaluation = evaluate_document(load_fixture("two_singlets"))
    assert evaluation.nchsh.lhs == pytest.approx(3 * math.sqrt(2), abs=1e-9)
    assert evaluation.steering_by_entanglement
    assert evaluation.ordering is None


def test_product_state_fixture():
    evaluation = evaluate_document(load_fixture("product_state"))
    assert evaluation.nchsh.lhs == pytest.approx(0.0, abs=1e-9)
    assert not evaluation.steering_by_entanglement


def test_declared_reverse_order_is_swapped():
    damped = amplitude_damped_singlet(0.3)
    doc = document(singlet().matrix, swap_halves(damped).matrix, bc_wires=("C'", "B"))
    s, ordering = resolve_scenario3(doc)
    assert ordering is None
    assert_allclose(s.rho_bc.matrix, damped.matrix, atol=1e-12)
    assert evaluate_document(doc).nchsh.lhs == pytest.approx(nchsh3_amplitude(0.0, 0.3).lhs, abs=1e-9)


def test_unresolved_order_without_target_keeps_larger_violation():
    damped = amplitude_damped_singlet(0.4)
    doc = document(singlet().matrix, swap_halves(damped).matrix, bc_wires=None)
    _, ordering = resolve_scenario3(doc)
    assert ordering.target is None
    assert ordering.candidates[ordering.chosen] == max(ordering.candidates.values())


def test_unknown_wire_labels_rejected():
    doc = document(singlet().matrix, singlet().matrix, bc_wires=("B", "X"))
    with pytest.raises(InvalidInputError):
        resolve_scenario3(doc)


def test_missing_file(tmp_path):
    with pytest.raises(ReportIOError) as info:
        load_scenario_file(str(tmp_path / "missing.json"))
    assert "missing.json" in str(info.value)


def test_malformed_files(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(InvalidInputError):
        load_scenario_file(str(broken))
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text(json.dumps({"name": "x"}))
    with pytest.raises(InvalidInputError):
        load_scenario_file(str(incomplete))


def test_four_party_document():
    matrix = pairs(singlet().matrix)
    doc = ScenarioDocument(
        name="chain",
        network="four-party",
        sources={
            "ac": {"wires": ["A", "C"], "matrix": matrix},
            "cd": {"wires": ["C'", "D"], "matrix": matrix},
            "db": {"wires": ["D'", "B"], "matrix": matrix},
        },
    )
    evaluation = evaluate_document(doc)
    assert evaluation.nchsh.lhs == pytest.approx(6 + 3 * math.sqrt(2), abs=1e-9)
    assert len(evaluation.outcome_probabilities) == 16
    assert evaluation.bilocal is None
