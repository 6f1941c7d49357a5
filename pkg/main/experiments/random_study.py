"""
How often the NCHSH-like inequality and the PPT criterion on the conditional
states detect steering for randomly drawn source pairs.
"""
from typing import Dict, Tuple
from tqdm import tqdm
from experiments.ensembles import random_product_pair, random_source_pair, sample_generators
from experiments.experiment import Experiment
from experiments.models import ExperimentReport, SweepSpec
from physics.network import Scenario3, conditional_states, correlators3, scenario3
from physics.quantum import DensityMatrix
from physics.scenario_files import load_fixture, resolve_scenario3
from physics.witnesses import min_ppt_over, nchsh3_lhs, steering_by_entanglement

CELLS = ("both", "inequality-only", "ppt-only", "neither")


def contingency_cell(violated: bool, entangled: bool) -> str:
    if violated and entangled:
        return "both"
    if violated:
        return "inequality-only"
    if entangled:
        return "ppt-only"
    return "neither"


def classify(source: str, s: Scenario3) -> Dict:
    verdict = nchsh3_lhs(correlators3(s))
    assemblage = conditional_states(s)
    entangled = steering_by_entanglement(assemblage)
    return {
        "source": source,
        "lhs": verdict.lhs,
        "violated": verdict.violated,
        "steering_by_entanglement": entangled,
        "min_ppt_eigenvalue": min_ppt_over(assemblage),
        "cell": contingency_cell(verdict.violated, entangled),
    }


class RandomStateStudy(Experiment):
    name = "Random Study"
    color = Experiment.BLUE

    COLUMNS = ["source", "lhs", "violated", "steering_by_entanglement", "min_ppt_eigenvalue", "cell"]

    @staticmethod
    def draw(spec: SweepSpec, rng) -> Tuple[DensityMatrix, DensityMatrix]:
        if spec.ensemble == "product":
            return random_product_pair(rng)
        return random_source_pair(rng, spec.rank)

    def run(self, spec: SweepSpec) -> ExperimentReport:
        ensemble = "pure product" if spec.ensemble == "product" else f"rank-{spec.rank} ginibre"
        self.log(f"Drawing {spec.samples} {ensemble} source pairs with seed {spec.seed} at θ = {spec.theta:.4f}")
        records = []
        generators = sample_generators(spec.seed, spec.samples)
        iterator = tqdm(generators) if self.show_progress else generators
        for index, rng in enumerate(iterator):
            rho_ac, rho_bc = self.draw(spec, rng)
            records.append(classify(f"sample-{index}", scenario3(rho_ac, rho_bc, spec.theta)))

        for name in spec.fixtures:
            s, _ = resolve_scenario3(load_fixture(name))
            record = classify(name, s)
            self.log(f"Fixture {name}: lhs {record['lhs']:.4f}, counted as {record['cell']}")
            records.append(record)

        contingency = {cell: 0 for cell in CELLS}
        for record in records:
            contingency[record["cell"]] += 1
        self.log("Contingency: " + ", ".join(f"{cell} {count}" for cell, count in contingency.items()))
        return ExperimentReport(
            spec=spec,
            columns=self.COLUMNS,
            records=records,
            contingency=contingency,
            notes=[f"{len(spec.fixtures)} bundled fixtures appended after the random samples"] if spec.fixtures else [],
        )
