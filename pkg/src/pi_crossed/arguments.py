# pi_crossed/arguments.py
import argparse
from typing import Optional, Sequence


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments for the verification runner.

    Argparse exits with status 2 on usage errors.
    """
    parser = argparse.ArgumentParser("pi-crossed", description="Run operator-algebra verification suites")
    parser.add_argument("-c", "--config", help="YAML or JSON config path")
    parser.add_argument(
        "--suite",
        action="append",
        dest="suites",
        help="Suite name(s), comma separated or repeated; 'all' runs everything",
    )
    parser.add_argument("--cutoff", type=int, help="Truncation cutoff for cone-indexed checks")
    parser.add_argument("--grid", type=int, dest="grid_n", help="Grid side N for grid representations")
    parser.add_argument("--tol", type=float, help="Override eqTol")
    parser.add_argument("--seed", type=int, help="Seed for randomized checks")
    parser.add_argument("--out", dest="out_path", help="Report output path")
    parser.add_argument("--list", action="store_true", help="List available suites and exit")
    parser.add_argument(
        "--log-level",
        choices=["debug", "info", "warning", "error", "critical"],
        help="Override configured log level",
    )
    parser.add_argument(
        "--inject-perturbation",
        action="store_true",
        help="Enable the negative-control suite (its checks are expected to fail)",
    )
    return parser.parse_args(argv)
