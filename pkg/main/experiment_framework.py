import csv
import logging
import os
import time
from typing import Dict, List
from experiments.comparison import BilocalComparison
from experiments.dual_node import DualNodeSweep
from experiments.experiment import Experiment
from experiments.models import ExperimentReport, SweepSpec
from experiments.random_study import RandomStateStudy
from experiments.sweeps import DistanceRegion, ThreePartyAmplitudeSweep, ThreePartyDepolarizingSweep
from errors import ReportIOError
from log_utils import BG_BLUE, RESET, WHITE, init_logging
from physics.scenario_files import ScenarioEvaluation, evaluate_document, list_fixtures, load_scenario_file
from settings import VERSION, Settings, use_tolerance_profile


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


class ExperimentFramework:
    RUNNERS = {
        "3party-depolarizing": lambda progress: ThreePartyDepolarizingSweep(progress),
        "3party-amplitude": lambda progress: ThreePartyAmplitudeSweep(progress),
        "4party-depolarizing": lambda progress: DualNodeSweep("depolarizing", progress),
        "4party-amplitude": lambda progress: DualNodeSweep("amplitude", progress),
        "distance": lambda progress: DistanceRegion(progress),
        "compare-bilocal": lambda progress: BilocalComparison(progress),
        "random-study": lambda progress: RandomStateStudy(progress),
    }

    def __init__(self, tolerance_profile: str = Settings.TOLERANCE_PROFILE,
                 show_progress: bool = Settings.SHOW_PROGRESS, log_level: str = Settings.LOG_LEVEL,
                 color: bool = True):
        init_logging(log_level, color)
        use_tolerance_profile(tolerance_profile)
        self.show_progress = show_progress

    def log(self, message: str):
        text = BG_BLUE + WHITE + "[Experiment Framework] " + message + RESET
        logging.info(text)

    def runner(self, kind: str) -> Experiment:
        return self.RUNNERS[kind](self.show_progress)

    def run(self, spec: SweepSpec) -> ExperimentReport:
        self.log(f"Kicking off {spec.kind}")
        start = time.perf_counter()
        report = self.runner(spec.kind).run(spec)
        report.duration_seconds = time.perf_counter() - start
        report.version = VERSION
        self.log(f"{spec.kind} completed with {len(report.records)} records in {report.duration_seconds:.2f}s")
        if spec.out:
            self.write_report(report, spec.out, spec.format)
        return report

    def write_report(self, report: ExperimentReport, path: str, fmt: str = "json") -> None:
        self.log(f"Writing {len(report.records)} records to {path}")
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            if fmt == "csv":
                self._write_csv(report, path)
            else:
                with open(path, "w") as file:
                    file.write(report.model_dump_json(indent=2))
        except OSError as e:
            logging.error(f"Failed to write report: {e}")
            raise ReportIOError(path, f"could not write report ({e})") from e

    @staticmethod
    def _write_csv(report: ExperimentReport, path: str) -> None:
        with open(path, "w", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(report.columns)
            for record in report.records:
                writer.writerow([format_value(record.get(column)) for column in report.columns])

    @staticmethod
    def read_csv(path: str) -> List[Dict[str, str]]:
        try:
            with open(path, "r", newline="") as file:
                return list(csv.DictReader(file))
        except OSError as e:
            raise ReportIOError(path, f"could not read report ({e})") from e

    def evaluate_scenario(self, path: str) -> ScenarioEvaluation:
        self.log(f"Evaluating scenario file {path}")
        evaluation = evaluate_document(load_scenario_file(path))
        verdict = evaluation.nchsh
        self.log(f"{evaluation.name}: NCHSH lhs {verdict.lhs:.6f} against {verdict.bound} "
                 f"({'violated' if verdict.violated else 'not violated'}), "
                 f"steering by entanglement: {evaluation.steering_by_entanglement}")
        return evaluation

    @staticmethod
    def fixtures() -> List[str]:
        return list_fixtures()
