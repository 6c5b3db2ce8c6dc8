"""Run every strategy on one graph and print the AUC gain table."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.core.exceptions import AlpineError
from src.core.generators import latent_space_graph
from src.core.network import load_edge_list
from src.models.experiment import ExperimentGrid
from src.services import ExperimentService, gain_table, timing_report
from src.utils.logger import logger


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Run all strategies at two steps and report the mean AUC gain.",
    )
    parser.add_argument(
        "--graph",
        type=Path,
        help="Edge list; a two-block random graph is used when omitted.",
    )
    parser.add_argument(
        "--seeds",
        type=int,
        default=3,
        help="Number of fit seeds per cell.",
    )
    parser.add_argument(
        "--steps",
        type=int,
        nargs="+",
        default=[1, 10],
        help="Steps to compare.",
    )
    parser.add_argument(
        "--output",
        type=Path,
        default=Path("budget_table.csv"),
        help="Results CSV.",
    )
    return parser.parse_args()


def main() -> int:
    args = parse_args()
    try:
        if args.graph is not None:
            truth = load_edge_list(args.graph)
            dataset = args.graph.stem
        else:
            truth = latent_space_graph([43, 13, 49], seed=0)
            dataset = "latent-space"
        grid = ExperimentGrid.from_config(
            dataset=dataset,
            seeds=list(range(args.seeds)),
            steps=args.steps,
        )
        result = ExperimentService().run_experiment(truth, grid, args.output.resolve())
    except AlpineError as exc:
        logger.error("Budget table failed: %s", exc)
        print(f"Error: {exc}")
        return 1

    print(gain_table(result).round(2).to_string())
    print()
    print(timing_report(result).to_string())
    return 0


if __name__ == "__main__":
    sys.exit(main())
