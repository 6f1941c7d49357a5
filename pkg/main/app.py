import argparse
import json
import logging
import math
import sys
from typing import List, Optional
from dotenv import load_dotenv
from pydantic import ValidationError
from errors import InvalidInputError, SteeringError
from experiment_framework import ExperimentFramework
from experiments.models import SweepSpec
from settings import PROFILES, Settings

load_dotenv(override=True)

COMMANDS = {
    "sweep3-depol": "3party-depolarizing",
    "sweep3-amp": "3party-amplitude",
    "distance": "distance",
    "compare": "compare-bilocal",
    "random-study": "random-study",
    "sweep4-depol": "4party-depolarizing",
    "sweep4-amp": "4party-amplitude",
}

THREE_D = ("sweep4-depol", "sweep4-amp")


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise InvalidInputError instead of exiting with status 2."""

    def error(self, message):
        raise InvalidInputError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="network-steering",
        description="Network steering witnesses for entanglement-swapping networks",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=f"run the {COMMANDS[command]} experiment")
        sub.add_argument("--theta", type=float, default=None, help="EJM angle (radians unless --degrees)")
        sub.add_argument("--degrees", action="store_true", help="read --theta in degrees")
        sub.add_argument("--grid", type=int, default=None, help="grid resolution per axis")
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--samples", type=int, default=100)
        sub.add_argument("--alpha", type=float, action="append", default=None, help="channel attenuation, repeatable")
        sub.add_argument("--ensemble", choices=["product", "ginibre"], default="product", help="source ensemble of the random study")
        sub.add_argument("--rank", type=int, default=2, help="rank of sampled sources in the ginibre ensemble")
        sub.add_argument("--inject", action="append", default=[], help="bundled fixture to add to the random study")
        sub.add_argument("--out", default=None, help="report path")
        sub.add_argument("--format", choices=["csv", "json"], default="json")
        _add_common(sub)

    witness = subparsers.add_parser("witness", help="evaluate a scenario file")
    witness.add_argument("path")
    _add_common(witness)

    fixtures = subparsers.add_parser("fixtures", help="list bundled fixtures")
    _add_common(fixtures)
    return parser


def _add_common(sub: ArgumentParser):
    sub.add_argument("--tolerance-profile", choices=sorted(PROFILES), default=Settings.TOLERANCE_PROFILE)
    sub.add_argument("--no-progress", action="store_true", help="hide progress bars")
    sub.add_argument("--no-color", action="store_true", help="strip ANSI colours from log lines")


class App:
    """Command-line entry point."""

    def __init__(self):
        self.framework = None

    def get_framework(self, args) -> ExperimentFramework:
        if not self.framework:
            self.framework = ExperimentFramework(
                tolerance_profile=args.tolerance_profile,
                show_progress=Settings.SHOW_PROGRESS and not args.no_progress,
                color=not args.no_color,
            )
        return self.framework

    @staticmethod
    def spec_from_args(args) -> SweepSpec:
        grid = args.grid
        if grid is None:
            grid = Settings.GRID_3D if args.command in THREE_D else Settings.GRID_2D
        fields = dict(
            kind=COMMANDS[args.command],
            grid=grid,
            theta=math.radians(args.theta) if args.degrees and args.theta is not None else args.theta,
            samples=args.samples,
            seed=args.seed,
            ensemble=args.ensemble,
            rank=args.rank,
            out=args.out,
            format=args.format,
            fixtures=args.inject,
        )
        if args.alpha:
            fields["alphas"] = args.alpha
        return SweepSpec(**fields)

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = build_parser().parse_args(argv)
        except InvalidInputError as e:
            logging.error(f"Invalid arguments: {e}")
            return e.exit_code
        try:
            framework = self.get_framework(args)
            if args.command == "fixtures":
                for name in framework.fixtures():
                    print(name)
            elif args.command == "witness":
                evaluation = framework.evaluate_scenario(args.path)
                print(evaluation.model_dump_json(indent=2))
            else:
                report = framework.run(self.spec_from_args(args))
                print(json.dumps(report.thresholds or report.contingency or {}, indent=2))
            return 0
        except ValidationError as e:
            logging.error(f"Invalid input: {e}")
            return InvalidInputError.exit_code
        except SteeringError as e:
            logging.error(f"Failed to run {args.command}: {e}")
            return e.exit_code


def main():
    sys.exit(App().run())


if __name__ == "__main__":
    main()
