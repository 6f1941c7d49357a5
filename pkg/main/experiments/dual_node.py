"""
Two-relay chain sweeps over the noise of its three sources.
"""
import math
from typing import Tuple
import numpy as np
from tqdm import tqdm
from experiments.bisection import bisect_threshold
from experiments.experiment import Experiment
from experiments.models import ExperimentReport, SweepSpec
from experiments.sweeps import require_bell_angle
from physics.channels import amplitude_damped_singlet, depolarized_singlet, swap_halves
from physics.network import Scenario4, correlators4, scenario4
from physics.quantum import AxisTriad, DensityMatrix, ejm_basis
from physics.witnesses import (
    NCHSH4_BOUND,
    WitnessVerdict,
    nchsh4_closed_form_amplitude,
    nchsh4_closed_form_depolarizing,
    nchsh4_lhs,
)


def depolarizing_sources(v1: float, v2: float, v3: float) -> Tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    return depolarized_singlet(v1), depolarized_singlet(v2), depolarized_singlet(v3)


def nchsh4_depolarizing(v1: float, v2: float, v3: float) -> WitnessVerdict:
    s = scenario4(*depolarizing_sources(v1, v2, v3))
    return nchsh4_lhs(correlators4(s))


def amplitude_sources(p1: float, p2: float, p3: float) -> Tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """
    Damping lands on the relay-held qubit: C of (A, C), D of (C', D) and D' of (D', B)
    """
    return amplitude_damped_singlet(p1), amplitude_damped_singlet(p2), swap_halves(amplitude_damped_singlet(p3))


def nchsh4_amplitude(p1: float, p2: float, p3: float) -> WitnessVerdict:
    s = scenario4(*amplitude_sources(p1, p2, p3))
    return nchsh4_lhs(correlators4(s))


class DualNodeSweep(Experiment):
    name = "Dual-Node Sweep"
    color = Experiment.RED

    def __init__(self, family: str, show_progress: bool = True):
        super().__init__(show_progress)
        if family not in ("depolarizing", "amplitude"):
            raise ValueError(f"Unknown noise family {family}")
        self.family = family
        self.symbol = "v" if family == "depolarizing" else "p"

    @property
    def columns(self):
        return [f"{self.symbol}1", f"{self.symbol}2", f"{self.symbol}3", "lhs", "closed_form", "violated"]

    def evaluate(self, a: float, b: float, c: float) -> WitnessVerdict:
        if self.family == "depolarizing":
            return nchsh4_depolarizing(a, b, c)
        return nchsh4_amplitude(a, b, c)

    def sources(self, a: float, b: float, c: float) -> Tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
        if self.family == "depolarizing":
            return depolarizing_sources(a, b, c)
        return amplitude_sources(a, b, c)

    def closed_form(self, a: float, b: float, c: float) -> float:
        if self.family == "depolarizing":
            return nchsh4_closed_form_depolarizing(a, b, c)
        return nchsh4_closed_form_amplitude(a, b, c)

    def run(self, spec: SweepSpec) -> ExperimentReport:
        require_bell_angle(spec.theta, "The dual-node sweep")
        self.log(f"Sweeping a {spec.grid}^3 grid of {self.family} noise on the chain")
        values = np.linspace(0.0, 1.0, spec.grid)
        # each source depends on its own noise value only
        per_value = [self.sources(x, x, x) for x in values]
        ejm = ejm_basis(spec.theta)
        triad = AxisTriad.pauli()
        records = []
        deviation = 0.0
        rows = list(enumerate(values))
        for i, a in (tqdm(rows) if self.show_progress else rows):
            for j, b in enumerate(values):
                for m, c in enumerate(values):
                    s = Scenario4(
                        rho_ac=per_value[i][0],
                        rho_cd=per_value[j][1],
                        rho_db=per_value[m][2],
                        ejm_c=ejm,
                        ejm_d=ejm,
                        alice_triad=triad,
                        bob_triad=triad,
                    )
                    verdict = nchsh4_lhs(correlators4(s))
                    closed = self.closed_form(a, b, c)
                    deviation = max(deviation, abs(verdict.lhs - closed))
                    records.append(dict(zip(self.columns, [float(a), float(b), float(c), verdict.lhs, closed, verdict.violated])))

        axis = bisect_threshold(lambda x: self.evaluate(x, 0.0, 0.0).lhs - NCHSH4_BOUND)
        closed_axis = bisect_threshold(lambda x: self.closed_form(x, 0.0, 0.0) - NCHSH4_BOUND)
        thresholds = {
            "noiseless": self.evaluate(0.0, 0.0, 0.0).lhs,
            f"{self.symbol}1_axis": axis.value,
            f"{self.symbol}1_axis_closed_form": closed_axis.value,
            "max_closed_form_deviation": deviation,
        }
        if self.family == "depolarizing":
            thresholds["v1_axis_exact"] = 1 - NCHSH4_BOUND / (6 + 3 * math.sqrt(2))
        self.log(f"Axis intercept {self.symbol}1* = {axis.value:.6f}")
        return ExperimentReport(spec=spec, columns=self.columns, records=records, thresholds=thresholds)
