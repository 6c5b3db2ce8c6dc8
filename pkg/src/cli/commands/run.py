"""Experiment grid command."""

from pathlib import Path
from typing import Optional, Tuple

import click
from rich.console import Console

from src.cli.commands.tables import frame_table
from src.cli.errors import handle_errors
from src.core.network import load_edge_list
from src.core.strategies import STRATEGY_NAMES
from src.models.experiment import ExperimentGrid
from src.services import ExperimentService, gain_table


@click.command()
@click.option("--graph", "graph_path", type=click.Path(path_type=Path), required=True, help="Edge list of the fully observed network.")
@click.option("--strategy", "strategies", type=click.Choice(STRATEGY_NAMES), multiple=True, help="Strategies to run (default: all).")
@click.option("--step", "steps", type=click.IntRange(min=1), multiple=True, help="Pairs queried per iteration.")
@click.option("--seed", "seeds", type=int, multiple=True, help="Embedding and strategy seeds.")
@click.option("--mask-seed", "mask_seeds", type=int, multiple=True, help="Seeds of the hidden-pair mask.")
@click.option("--hide-frac", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=None, help="Fraction of pairs hidden.")
@click.option("--budget-frac", type=click.FloatRange(0.0, 1.0, min_open=True), default=None, help="Budget as a fraction of the initial pool.")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Absolute budget; overrides --budget-frac.")
@click.option("--dim", type=click.IntRange(min=1), default=None, help="Embedding dimension.")
@click.option("--gamma", type=click.FloatRange(0.0, min_open=True), default=None)
@click.option("--ridge", type=click.FloatRange(0.0), default=None)
@click.option("--cold-start", is_flag=True, help="Refit from random init every iteration.")
@click.option("--exclude-self-pair", is_flag=True, help="Drop the queried pair from the variance sum.")
@click.option("--early-stop-auc", type=click.FloatRange(0.0, 1.0, min_open=True), default=None)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--dataset", default=None, help="Dataset name in the results (default: graph file stem).")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Results CSV.")
def run(
    graph_path: Path,
    strategies: Tuple[str, ...],
    steps: Tuple[int, ...],
    seeds: Tuple[int, ...],
    mask_seeds: Tuple[int, ...],
    hide_frac: Optional[float],
    budget_frac: Optional[float],
    budget: Optional[int],
    dim: Optional[int],
    gamma: Optional[float],
    ridge: Optional[float],
    cold_start: bool,
    exclude_self_pair: bool,
    early_stop_auc: Optional[float],
    jobs: int,
    dataset: Optional[str],
    out: Path,
) -> None:
    """Run active learning campaigns over a grid and write one row per iteration."""
    with handle_errors():
        truth = load_edge_list(graph_path)
        grid = ExperimentGrid.from_config(
            dataset=dataset or graph_path.stem,
            strategies=list(strategies) or None,
            steps=list(steps) or None,
            seeds=list(seeds) or None,
            mask_seeds=list(mask_seeds) or None,
            hide_fraction=hide_frac,
            budget_fraction=budget_frac,
            budget=budget,
            dim=dim,
            gamma=gamma,
            ridge=ridge,
            cold_start=cold_start or None,
            exclude_self_pair=exclude_self_pair or None,
            early_stop_auc=early_stop_auc,
            jobs=jobs,
        )
        result = ExperimentService().run_experiment(truth, grid, out.resolve())

    console = Console()
    table = gain_table(result)
    if not table.empty:
        console.print(frame_table(table, title="Mean AUC gain (pp)", index_name="strategy"))
    click.echo(f"Experiment completed: rows={len(result.rows)} failed_cells={len(result.failures)} output={out}")
    for failure in result.failures:
        click.echo(
            f"  failed: strategy={failure.strategy} seed={failure.seed} "
            f"mask_seed={failure.mask_seed} step={failure.step}: {failure.error}",
            err=True,
        )
