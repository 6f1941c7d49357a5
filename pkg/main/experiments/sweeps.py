"""
One-relay noise sweeps: depolarizing and amplitude-damping regions over two
sources, and the channel-length region for the depolarizing channel.
"""
import math
from typing import Callable, Dict, List
import numpy as np
from tqdm import tqdm
from errors import InvalidInputError
from experiments.bisection import bisect_threshold
from experiments.experiment import Experiment
from experiments.models import ExperimentReport, SweepSpec
from physics.channels import (
    amplitude_damped_singlet,
    apply_depolarizing_channel,
    depolarized_singlet,
    depolarizing_survival,
    singlet,
)
from physics.network import correlators3, scenario3
from physics.witnesses import (
    NCHSH3_BOUND,
    WitnessVerdict,
    distance_bound,
    nchsh3_closed_form_amplitude,
    nchsh3_closed_form_depolarizing,
    nchsh3_lhs,
)

# The relay-bound qubit of each source: C in (A, C) and C' in (B, C')
RELAY_WIRE = 1


def nchsh3_depolarizing(v1: float, v2: float, theta: float = math.pi / 2) -> WitnessVerdict:
    s = scenario3(depolarized_singlet(v1), depolarized_singlet(v2), theta)
    return nchsh3_lhs(correlators3(s))


def nchsh3_amplitude(p1: float, p2: float) -> WitnessVerdict:
    s = scenario3(amplitude_damped_singlet(p1), amplitude_damped_singlet(p2))
    return nchsh3_lhs(correlators3(s))


def nchsh3_distance(l1: float, l2: float, alpha: float) -> WitnessVerdict:
    s = scenario3(
        apply_depolarizing_channel(singlet(), RELAY_WIRE, alpha, l1),
        apply_depolarizing_channel(singlet(), RELAY_WIRE, alpha, l2),
    )
    return nchsh3_lhs(correlators3(s))


def boundary_polyline(lhs: Callable[[float, float], float], bound: float, ys, lo: float, hi: float) -> List[List[float]]:
    """
    For each y, the x at which lhs(x, y) drops to the bound; rows never violated are skipped
    """
    points = []
    for y in ys:
        threshold = bisect_threshold(lambda x: lhs(x, y) - bound, lo, hi)
        if threshold.bracketed:
            points.append([threshold.value, float(y)])
    return points


def require_bell_angle(theta: float, what: str):
    if abs(theta - math.pi / 2) > 1e-12:
        raise InvalidInputError(f"{what} is defined for theta = pi/2, got {theta}")


class ThreePartyDepolarizingSweep(Experiment):
    name = "Depolarizing Sweep"
    color = Experiment.CYAN

    COLUMNS = ["v1", "v2", "lhs", "closed_form", "violated"]

    def run(self, spec: SweepSpec) -> ExperimentReport:
        theta = spec.theta
        self.log(f"Sweeping a {spec.grid}x{spec.grid} grid of depolarizing noise at theta = {theta:.6f}")
        values = np.linspace(0.0, 1.0, spec.grid)
        records = []
        deviation = 0.0
        rows = tqdm(values) if self.show_progress else values
        for v1 in rows:
            for v2 in values:
                verdict = nchsh3_depolarizing(v1, v2, theta)
                closed = nchsh3_closed_form_depolarizing(v1, v2, theta)
                deviation = max(deviation, abs(verdict.lhs - closed))
                records.append({"v1": float(v1), "v2": float(v2), "lhs": verdict.lhs,
                                "closed_form": closed, "violated": verdict.violated})

        def lhs(v1, v2):
            return nchsh3_depolarizing(v1, v2, theta).lhs

        strength = 3 * math.sqrt(1 + math.sin(theta) ** 2)
        axis = bisect_threshold(lambda v: lhs(v, 0.0) - NCHSH3_BOUND)
        equal = bisect_threshold(lambda v: lhs(v, v) - NCHSH3_BOUND)
        thresholds = {
            "v1_axis": axis.value,
            "v1_axis_closed_form": 1 - NCHSH3_BOUND / strength,
            "equal_noise": equal.value,
            "equal_noise_closed_form": 1 - math.sqrt(NCHSH3_BOUND / strength),
            "survival_product": (1 - equal.value) ** 2,
            "survival_product_closed_form": NCHSH3_BOUND / strength,
            "max_closed_form_deviation": deviation,
        }
        self.log(f"Axis intercept v1* = {axis.value:.6f}, equal-noise threshold v* = {equal.value:.6f}")
        return ExperimentReport(
            spec=spec,
            columns=self.COLUMNS,
            records=records,
            thresholds=thresholds,
            boundary={"v1_of_v2": boundary_polyline(lhs, NCHSH3_BOUND, values, 0.0, 1.0)},
        )


class ThreePartyAmplitudeSweep(Experiment):
    name = "Amplitude Sweep"
    color = Experiment.MAGENTA

    COLUMNS = ["p1", "p2", "lhs", "closed_form", "violated"]

    def run(self, spec: SweepSpec) -> ExperimentReport:
        require_bell_angle(spec.theta, "The amplitude-damping sweep")
        self.log(f"Sweeping a {spec.grid}x{spec.grid} grid of amplitude damping")
        values = np.linspace(0.0, 1.0, spec.grid)
        records = []
        deviation = 0.0
        rows = tqdm(values) if self.show_progress else values
        for p1 in rows:
            for p2 in values:
                verdict = nchsh3_amplitude(p1, p2)
                closed = nchsh3_closed_form_amplitude(p1, p2)
                deviation = max(deviation, abs(verdict.lhs - closed))
                records.append({"p1": float(p1), "p2": float(p2), "lhs": verdict.lhs,
                                "closed_form": closed, "violated": verdict.violated})

        def lhs(p1, p2):
            return nchsh3_amplitude(p1, p2).lhs

        axis = bisect_threshold(lambda p: lhs(p, 0.0) - NCHSH3_BOUND)
        thresholds = {
            "p1_axis": axis.value,
            "p1_axis_closed_form": bisect_threshold(
                lambda p: nchsh3_closed_form_amplitude(p, 0.0) - NCHSH3_BOUND).value,
            "equal_noise": bisect_threshold(lambda p: lhs(p, p) - NCHSH3_BOUND).value,
            "equal_noise_closed_form": bisect_threshold(
                lambda p: nchsh3_closed_form_amplitude(p, p) - NCHSH3_BOUND).value,
            "max_closed_form_deviation": deviation,
        }
        self.log(f"Axis intercept p1* = {axis.value:.6f}")
        return ExperimentReport(
            spec=spec,
            columns=self.COLUMNS,
            records=records,
            thresholds=thresholds,
            boundary={"p1_of_p2": boundary_polyline(lhs, NCHSH3_BOUND, values, 0.0, 1.0)},
        )


class DistanceRegion(Experiment):
    name = "Distance Region"
    color = Experiment.GREEN

    COLUMNS = ["alpha", "l1", "l2", "lhs", "closed_form", "violated", "below_bound"]

    # The grid spans this multiple of the bound on each axis
    SPAN = 1.5

    def run(self, spec: SweepSpec) -> ExperimentReport:
        records = []
        thresholds: Dict[str, float] = {}
        boundary: Dict[str, List[List[float]]] = {}
        alphas = tqdm(spec.alphas) if self.show_progress else spec.alphas
        for alpha in alphas:
            bound = distance_bound(alpha)
            span = self.SPAN * bound
            lengths = np.linspace(0.0, span, spec.grid)
            # the channel on each source depends on its own length only
            sources = [apply_depolarizing_channel(singlet(), RELAY_WIRE, alpha, l) for l in lengths]
            mismatched = 0
            for i, l1 in enumerate(lengths):
                for j, l2 in enumerate(lengths):
                    verdict = nchsh3_lhs(correlators3(scenario3(sources[i], sources[j])))
                    closed = 3 * math.sqrt(2) * depolarizing_survival(alpha, l1 + l2)
                    below = bool(l1 + l2 < bound)
                    mismatched += int(verdict.violated != below)
                    records.append({"alpha": alpha, "l1": float(l1), "l2": float(l2), "lhs": verdict.lhs,
                                    "closed_form": closed, "violated": verdict.violated, "below_bound": below})
            intercept = bisect_threshold(lambda l: nchsh3_distance(l, 0.0, alpha).lhs - NCHSH3_BOUND, 0.0, span)
            thresholds[f"bound_alpha_{alpha}"] = bound
            thresholds[f"intercept_alpha_{alpha}"] = intercept.value
            thresholds[f"cell_alpha_{alpha}"] = span / (spec.grid - 1)
            thresholds[f"mismatched_alpha_{alpha}"] = float(mismatched)
            boundary[f"alpha_{alpha}"] = [[bound, 0.0], [0.0, bound]]
            self.log(f"alpha = {alpha}: bound {bound:.6f}, simulated intercept {intercept.value:.6f}, "
                     f"{mismatched} mismatched cells")
        return ExperimentReport(
            spec=spec,
            columns=self.COLUMNS,
            records=records,
            thresholds=thresholds,
            boundary=boundary,
        )
