"""
Noise tolerance of the NCHSH-like steering test against the bilocal test,
for two equally depolarized singlets, as a function of the EJM angle.
"""
import math
import numpy as np
from tqdm import tqdm
from experiments.bisection import bisect_threshold
from experiments.experiment import Experiment
from experiments.models import ExperimentReport, SweepSpec
from physics.channels import depolarized_singlet
from physics.network import correlators3, scenario3
from physics.witnesses import NCHSH3_BOUND, BilocalVerdict, bilocal_test, nchsh3_lhs


def bilocal_equal_noise(v: float, theta: float) -> BilocalVerdict:
    s = scenario3(depolarized_singlet(v), depolarized_singlet(v), theta)
    return bilocal_test(correlators3(s))


def steering_threshold_closed_form(theta: float) -> float:
    return 1 - math.sqrt(NCHSH3_BOUND / (3 * math.sqrt(1 + math.sin(theta) ** 2)))


def bilocal_threshold_closed_form(theta: float) -> float:
    """
    Largest v with (1-v)cosθ + 3(1-v)² > 3, or 0 when even the noiseless sources fail
    """
    c = math.cos(theta)
    survival = (-c + math.sqrt(c * c + 36)) / 6
    return max(0.0, 1 - survival)


class BilocalComparison(Experiment):
    name = "Bilocal Comparison"
    color = Experiment.YELLOW

    COLUMNS = ["theta", "v_steer", "v_steer_closed_form", "v_biloc", "v_biloc_closed_form", "gap"]

    def run(self, spec: SweepSpec) -> ExperimentReport:
        self.log(f"Comparing noise thresholds over {spec.grid} angles in [0, pi]")
        thetas = np.linspace(0.0, math.pi, spec.grid)
        records = []
        iterator = tqdm(thetas) if self.show_progress else thetas
        for theta in iterator:
            theta = float(theta)
            steer = bisect_threshold(
                lambda v: nchsh3_lhs(correlators3(scenario3(depolarized_singlet(v), depolarized_singlet(v), theta))).lhs
                - NCHSH3_BOUND
            )

            def bilocal_margin(v):
                verdict = bilocal_equal_noise(v, theta)
                return verdict.B - verdict.bound

            biloc = bisect_threshold(bilocal_margin)
            records.append({
                "theta": theta,
                "v_steer": steer.value,
                "v_steer_closed_form": steering_threshold_closed_form(theta),
                "v_biloc": biloc.value,
                "v_biloc_closed_form": bilocal_threshold_closed_form(theta),
                "gap": steer.value - biloc.value,
            })
        smallest_gap = min(record["gap"] for record in records)
        self.log(f"Smallest steering-minus-bilocal gap over the grid: {smallest_gap:.6f}")
        return ExperimentReport(
            spec=spec,
            columns=self.COLUMNS,
            records=records,
            thresholds={"min_gap": smallest_gap},
            boundary={
                "steering": [[r["theta"], r["v_steer"]] for r in records],
                "bilocal": [[r["theta"], r["v_biloc"]] for r in records],
            },
        )
