"""
Scenario import format and the bundled reference scenarios.

A scenario file is a JSON document carrying complex matrices as [re, im]
pairs, a wire-order declaration per source, the EJM angle and the measurement
triads. A source whose "wires" is null has an unresolved order: both readings
are evaluated and the one matching the expected NCHSH value (or, lacking
one, the larger violation) is kept and logged.
"""
import json
import logging
import os
from typing import Dict, List, Literal, Optional, Tuple
import numpy as np
from pydantic import BaseModel, Field, ValidationError
from errors import InvalidInputError, ReportIOError
from physics.channels import swap_halves
from physics.network import (
    Scenario3,
    Scenario4,
    conditional_states,
    conditional_states4,
    correlators3,
    correlators4,
)
from physics.quantum import AxisTriad, DensityMatrix, ejm_basis
from physics.witnesses import (
    BilocalVerdict,
    WitnessVerdict,
    bilocal_test,
    min_ppt_over,
    nchsh3_lhs,
    nchsh4_lhs,
    steering_by_entanglement,
)

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURE_DIR = os.path.join(BASE_DIR, "fixtures")

# Stored wire order of each source inside Scenario3 / Scenario4
CANONICAL_WIRES = {
    "three-party": {"ac": ("A", "C"), "bc": ("B", "C'")},
    "four-party": {"ac": ("A", "C"), "cd": ("C'", "D"), "db": ("D'", "B")},
}

ComplexEntry = Tuple[float, float]


def matrix_from_pairs(rows: List[List[ComplexEntry]]) -> np.ndarray:
    return np.array([[re + 1j * im for re, im in row] for row in rows], dtype=complex)


class SourceEntry(BaseModel):
    wires: Optional[Tuple[str, str]] = Field(default=None, description="Wire labels in matrix order; null if unknown")
    matrix: List[List[ComplexEntry]]

    def to_array(self) -> np.ndarray:
        return matrix_from_pairs(self.matrix)


class Expected(BaseModel):
    """
    Values attached to a document: what the pipeline gives, or what was printed
    """

    nchsh3: Optional[float] = None
    steering_by_entanglement: Optional[bool] = None
    conditional_eigenvalues: List[List[float]] = Field(default_factory=list)
    conditional_states: List[List[List[ComplexEntry]]] = Field(default_factory=list)


class ScenarioDocument(BaseModel):
    name: str
    description: str = ""
    network: Literal["three-party", "four-party"] = "three-party"
    theta: float = float(np.pi / 2)
    theta_d: Optional[float] = None
    sources: Dict[str, SourceEntry]
    triads: Dict[str, List[List[float]]] = Field(default_factory=dict)
    expected: Expected = Field(default_factory=Expected)
    published: Expected = Field(
        default_factory=Expected,
        description="Values printed with the matrices, kept for comparison when they are not reproduced",
    )

    def triad(self, party: str) -> AxisTriad:
        axes = self.triads.get(party)
        return AxisTriad(axes=axes) if axes is not None else AxisTriad.pauli()


class OrderingDetermination(BaseModel):
    """
    Outcome of evaluating both readings of an unresolved source
    """

    document: str
    source: str
    candidates: Dict[str, float]
    chosen: str
    target: Optional[float] = None


class ScenarioEvaluation(BaseModel):
    name: str
    network: str
    nchsh: WitnessVerdict
    bilocal: Optional[BilocalVerdict] = None
    steering_by_entanglement: bool
    min_ppt_eigenvalue: float
    outcome_probabilities: List[float]
    conditional_eigenvalues: List[List[float]]
    ordering: Optional[OrderingDetermination] = None


def load_scenario_file(path: str) -> ScenarioDocument:
    try:
        with open(path, "r") as file:
            data = json.load(file)
    except OSError as e:
        raise ReportIOError(path, f"could not read scenario file ({e})") from e
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path}: not valid JSON ({e})") from e
    try:
        return ScenarioDocument(**data)
    except (ValidationError, TypeError) as e:
        raise InvalidInputError(f"{path}: invalid scenario document ({e})") from e


def list_fixtures() -> List[str]:
    return sorted(name[:-5] for name in os.listdir(FIXTURE_DIR) if name.endswith(".json"))


def fixture_path(name: str) -> str:
    if name not in list_fixtures():
        raise InvalidInputError(f"Unknown fixture '{name}', available: {list_fixtures()}")
    return os.path.join(FIXTURE_DIR, f"{name}.json")


def load_fixture(name: str) -> ScenarioDocument:
    return load_scenario_file(fixture_path(name))


def _source_state(doc: ScenarioDocument, key: str, wires: Tuple[str, str]) -> DensityMatrix:
    """
    The source as a state stored in canonical order, given the order its matrix is written in
    """
    entry = doc.sources.get(key)
    if entry is None:
        raise InvalidInputError(f"{doc.name}: missing source '{key}'")
    canonical = CANONICAL_WIRES[doc.network][key]
    state = DensityMatrix.from_printed(entry.to_array(), (2, 2), label=f"{doc.name}/{key}")
    if tuple(wires) == canonical:
        return state
    if tuple(wires) == canonical[::-1]:
        return swap_halves(state)
    raise InvalidInputError(f"{doc.name}: source '{key}' has wires {wires}, expected an order of {canonical}")


def scenario3_from_document(doc: ScenarioDocument, bc_wires: Optional[Tuple[str, str]] = None) -> Scenario3:
    if doc.network != "three-party":
        raise InvalidInputError(f"{doc.name} describes a {doc.network} network")
    for key in ("ac", "bc"):
        if key not in doc.sources:
            raise InvalidInputError(f"{doc.name}: missing source '{key}'")
    ac_wires = doc.sources["ac"].wires
    if bc_wires is None:
        bc_wires = doc.sources["bc"].wires
    if ac_wires is None or bc_wires is None:
        raise InvalidInputError(f"{doc.name}: wire order is unresolved; use resolve_scenario3")
    return Scenario3(
        rho_ac=_source_state(doc, "ac", ac_wires),
        rho_bc=_source_state(doc, "bc", bc_wires),
        ejm=ejm_basis(doc.theta),
        alice_triad=doc.triad("alice"),
        bob_triad=doc.triad("bob"),
    )


def scenario4_from_document(doc: ScenarioDocument) -> Scenario4:
    if doc.network != "four-party":
        raise InvalidInputError(f"{doc.name} describes a {doc.network} network")
    states = {}
    for key in ("ac", "cd", "db"):
        entry = doc.sources.get(key)
        if entry is None or entry.wires is None:
            raise InvalidInputError(f"{doc.name}: source '{key}' needs a declared wire order")
        states[key] = _source_state(doc, key, entry.wires)
    return Scenario4(
        rho_ac=states["ac"],
        rho_cd=states["cd"],
        rho_db=states["db"],
        ejm_c=ejm_basis(doc.theta),
        ejm_d=ejm_basis(doc.theta_d if doc.theta_d is not None else doc.theta),
        alice_triad=doc.triad("alice"),
        bob_triad=doc.triad("bob"),
    )


def resolve_scenario3(doc: ScenarioDocument) -> Tuple[Scenario3, Optional[OrderingDetermination]]:
    """
    Build the scenario, settling an undeclared order of the Bob-side source
    """
    if "bc" not in doc.sources:
        raise InvalidInputError(f"{doc.name}: missing source 'bc'")
    if doc.sources["bc"].wires is not None:
        return scenario3_from_document(doc), None

    canonical = CANONICAL_WIRES["three-party"]["bc"]
    candidates = {}
    scenarios = {}
    for wires in (canonical, canonical[::-1]):
        label = ",".join(wires)
        scenarios[label] = scenario3_from_document(doc, bc_wires=wires)
        candidates[label] = nchsh3_lhs(correlators3(scenarios[label])).lhs

    target = doc.expected.nchsh3
    if target is not None:
        chosen = min(candidates, key=lambda label: abs(candidates[label] - target))
    else:
        chosen = max(candidates, key=candidates.get)
    determination = OrderingDetermination(
        document=doc.name, source="bc", candidates=candidates, chosen=chosen, target=target
    )
    logging.info(
        f"{doc.name}: source 'bc' read as ({chosen}); candidate NCHSH values "
        + ", ".join(f"({label}) {value:.4f}" for label, value in candidates.items())
        + (f", target {target}" if target is not None else ", no target, larger violation kept")
    )
    return scenarios[chosen], determination


def evaluate_document(doc: ScenarioDocument) -> ScenarioEvaluation:
    """
    Every criterion for one scenario document
    """
    if doc.network == "three-party":
        scenario, ordering = resolve_scenario3(doc)
        table = correlators3(scenario)
        verdict = nchsh3_lhs(table)
        bilocal = bilocal_test(table)
        assemblage = conditional_states(scenario)
    else:
        scenario, ordering = scenario4_from_document(doc), None
        verdict = nchsh4_lhs(correlators4(scenario))
        bilocal = None
        assemblage = conditional_states4(scenario)
    return ScenarioEvaluation(
        name=doc.name,
        network=doc.network,
        nchsh=verdict,
        bilocal=bilocal,
        steering_by_entanglement=steering_by_entanglement(assemblage),
        min_ppt_eigenvalue=min_ppt_over(assemblage),
        outcome_probabilities=assemblage.probabilities().tolist(),
        conditional_eigenvalues=[
            (o.state.eigenvalues()[::-1].tolist() if o.state is not None else [])
            for o in assemblage.outcomes
        ],
        ordering=ordering,
    )
