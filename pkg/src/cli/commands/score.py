"""Single-pass commands: mask a graph, score its unknown pool, compute an AUC."""

from pathlib import Path
from typing import Optional

import click
import numpy as np

from src.cli.errors import handle_errors
from src.core.cne import fit
from src.core.exceptions import DataError
from src.core.metrics import auc_score
from src.core.network import apply_mask, load_edge_list
from src.core.pagerank import PageRankConfig
from src.core.strategies import STRATEGY_NAMES, ScoringContext, get_strategy
from src.exporters.files import (
    read_mask,
    read_score_table,
    write_embedding,
    write_mask,
    write_score_dump,
)
from src.models.embedding import FitConfig
from src.models.network import MaskSpec
from src.utils.config import config
from src.utils.logger import logger

_logger = logger.getChild("cli")


@click.command()
@click.option("--graph", "graph_path", type=click.Path(path_type=Path), required=True)
@click.option("--hide-frac", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=None)
@click.option("--mask-seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Mask file, one 'i j' line per unknown pair.")
def mask(graph_path: Path, hide_frac: Optional[float], mask_seed: int, out: Path) -> None:
    """Hide a uniform fraction of pairs and write the mask for replay."""
    with handle_errors():
        truth = load_edge_list(graph_path)
        hide = hide_frac if hide_frac is not None else config.section("campaign").get("hide_fraction", 0.2)
        net0, _ = apply_mask(truth, MaskSpec(hide_fraction=hide, seed=mask_seed))
        write_mask(net0, out)
    click.echo(f"Mask written: unknown={len(net0.unknown)} output={out}")


@click.command()
@click.option("--graph", "graph_path", type=click.Path(path_type=Path), required=True)
@click.option("--mask", "mask_path", type=click.Path(path_type=Path), default=None, help="Mask file; default hides --hide-frac of pairs.")
@click.option("--hide-frac", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=None)
@click.option("--mask-seed", type=int, default=0, show_default=True)
@click.option("--strategy", type=click.Choice(STRATEGY_NAMES), default="v-opt", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dim", type=click.IntRange(min=1), default=None)
@click.option("--gamma", type=click.FloatRange(0.0, min_open=True), default=None)
@click.option("--ridge", type=click.FloatRange(0.0), default=None)
@click.option("--embedding-out", type=click.Path(path_type=Path), default=None)
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Score CSV.")
def score(
    graph_path: Path,
    mask_path: Optional[Path],
    hide_frac: Optional[float],
    mask_seed: int,
    strategy: str,
    seed: int,
    dim: Optional[int],
    gamma: Optional[float],
    ridge: Optional[float],
    embedding_out: Optional[Path],
    out: Path,
) -> None:
    """Fit the embedding once and dump the strategy's utility for every unknown pair."""
    with handle_errors():
        truth = load_edge_list(graph_path)
        if mask_path is not None:
            net0, _ = read_mask(truth, mask_path)
        else:
            hide = hide_frac if hide_frac is not None else config.section("campaign").get("hide_fraction", 0.2)
            net0, _ = apply_mask(truth, MaskSpec(hide_fraction=hide, seed=mask_seed))

        gamma = gamma if gamma is not None else config.section("embedding").get("gamma", 1.0)
        ridge = ridge if ridge is not None else config.section("voptimality").get("ridge", 1e-4)
        model = fit(net0, FitConfig.from_config(seed=seed, dim=dim), gamma)
        scores = get_strategy(strategy).score(
            ScoringContext(
                net=net0,
                model=model,
                rng=np.random.default_rng(seed),
                ridge=ridge,
                pagerank=PageRankConfig.from_config(),
            )
        )
        write_score_dump(scores, out)
        if embedding_out is not None:
            write_embedding(model, embedding_out)
    _logger.info("Scores written | strategy=%s | pairs=%s | output=%s", strategy, len(scores), out)
    click.echo(f"Scores written: pairs={len(scores)} output={out}")


@click.command()
@click.option("--scores", "scores_path", type=click.Path(path_type=Path), required=True, help="CSV with 'score' and either 'label' or 'i','j' columns.")
@click.option("--graph", "graph_path", type=click.Path(path_type=Path), default=None, help="Ground truth used to label pairs.")
def auc(scores_path: Path, graph_path: Optional[Path]) -> None:
    """AUC of a score table; labels come from a 'label' column or the ground truth."""
    with handle_errors():
        frame = read_score_table(scores_path)
        if "label" in frame.columns:
            labels = frame["label"].to_numpy()
        elif graph_path is not None and {"i", "j"} <= set(frame.columns):
            truth = load_edge_list(graph_path)
            pairs = frame[["i", "j"]].to_numpy(dtype=np.int64)
            labels = np.array([int(truth.canonical(pair) in truth.edges) for pair in pairs])
        else:
            raise DataError(f"{scores_path}: needs a 'label' column or --graph with 'i','j' columns")
        value = auc_score(frame["score"].to_numpy(), labels)
    click.echo(f"AUC: {value:.6f}")
