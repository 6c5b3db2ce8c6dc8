"""New-node study command."""

from pathlib import Path
from typing import Optional

import click
from rich.console import Console

from src.cli.commands.tables import frame_table
from src.cli.errors import handle_errors
from src.core.network import load_edge_list
from src.core.strategies import STRATEGY_NAMES
from src.services import StudyService


@click.command(name="new-node")
@click.option("--graph", "graph_path", type=click.Path(path_type=Path), required=True)
@click.option("--node", required=True, help="Node id (as in the edge list) treated as new.")
@click.option("--anchor", required=True, help="Partner whose link to the new node stays observed.")
@click.option("--strategy", type=click.Choice(STRATEGY_NAMES), default="v-opt", show_default=True)
@click.option("--iters", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dim", type=click.IntRange(min=1), default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="CSV of every ranking.")
def new_node(
    graph_path: Path,
    node: str,
    anchor: str,
    strategy: str,
    iters: int,
    seed: int,
    dim: Optional[int],
    out: Optional[Path],
) -> None:
    """Rank the candidate partners of a node whose links are hidden."""
    with handle_errors():
        truth = load_edge_list(graph_path)
        study = StudyService().new_node_study(
            truth,
            truth.index_of(node),
            truth.index_of(anchor),
            strategy=strategy,
            iters=iters,
            seed=seed,
            fit_overrides={"dim": dim},
        )

    top = study.top().set_index("iteration")[["label", "score", "observed_degree", "connected"]]
    Console().print(frame_table(top, title=f"Top candidate per iteration ({strategy})", index_name="it"))
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        study.to_frame().to_csv(out, index=False)
        click.echo(f"Rankings written: {out}")
