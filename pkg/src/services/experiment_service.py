"""Experiment grid runner and result summaries."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd
from tqdm import tqdm

from src.core.exceptions import AlpineError
from src.core.network import apply_mask
from src.exporters.files import ResultsWriter
from src.models.campaign import CampaignConfig, CampaignState
from src.models.experiment import (
    RESULT_COLUMNS,
    Cell,
    CellFailure,
    ExperimentGrid,
    ExperimentResult,
    ExperimentRow,
)
from src.models.network import MaskSpec, PartialNetwork
from src.services.base_service import BaseService
from src.services.campaign_service import CampaignService

CellOutcome = Tuple[Cell, List[ExperimentRow], Optional[CellFailure]]


class ExperimentService(BaseService):
    """Run every (mask seed, fit seed, strategy, step) cell of a grid."""

    def run_experiment(
        self,
        truth: PartialNetwork,
        grid: ExperimentGrid,
        out: Optional[Path] = None,
    ) -> ExperimentResult:
        """Campaigns over ``grid``; rows are appended to ``out`` as cells finish."""
        result = ExperimentResult()
        if grid.size == 0:
            self._logger.warning("Empty experiment grid | dataset=%s", grid.dataset)
            return result

        writer = ResultsWriter(self.ensure_output_dir(out), RESULT_COLUMNS) if out else None
        self._logger.info(
            "Starting experiment | dataset=%s | cells=%s | jobs=%s",
            grid.dataset,
            grid.size,
            grid.jobs,
        )

        # map() yields in submission order, so the CSV is identical for any job count
        with ThreadPoolExecutor(max_workers=grid.jobs) as executor:
            outcomes = executor.map(lambda cell: self._run_cell(truth, grid, cell), grid.cells())
            for cell, rows, failure in tqdm(
                outcomes,
                total=grid.size,
                desc=grid.dataset,
                unit="cell",
                leave=False,
                disable=not self.progress,
            ):
                if failure is not None:
                    result.failures.append(failure)
                    continue
                result.rows.extend(rows)
                if writer is not None:
                    writer.write_rows(row.as_dict() for row in rows)

        self._logger.info(
            "Experiment finished | dataset=%s | rows=%s | failed_cells=%s",
            grid.dataset,
            len(result.rows),
            len(result.failures),
        )
        return result

    def _run_cell(self, truth: PartialNetwork, grid: ExperimentGrid, cell: Cell) -> CellOutcome:
        mask_seed, seed, strategy, step = cell
        try:
            net0, oracle = apply_mask(truth, MaskSpec(hide_fraction=grid.hide_fraction, seed=mask_seed))
            cfg = CampaignConfig.from_config(
                strategy=strategy,
                step=step,
                budget=grid.budget,
                budget_fraction=grid.budget_fraction,
                gamma=grid.gamma,
                ridge=grid.ridge,
                exclude_self_pair=grid.exclude_self_pair,
                cold_start=grid.cold_start,
                early_stop_auc=grid.early_stop_auc,
                seed=seed,
                fit_overrides={"seed": seed, "dim": grid.dim},
            )
            state = CampaignService(progress=False).run_campaign(net0, oracle, cfg)
        except Exception as exc:
            self._logger.error(
                "Cell failed | strategy=%s | seed=%s | mask_seed=%s | step=%s | error=%s",
                strategy,
                seed,
                mask_seed,
                step,
                exc,
                exc_info=not isinstance(exc, AlpineError),
            )
            failure = CellFailure(
                dataset=grid.dataset,
                strategy=strategy,
                seed=seed,
                mask_seed=mask_seed,
                step=step,
                error=str(exc) if isinstance(exc, AlpineError) else f"{type(exc).__name__}: {exc}",
            )
            return cell, [], failure
        return cell, _rows(grid.dataset, cell, state), None


def _rows(dataset: str, cell: Cell, state: CampaignState) -> List[ExperimentRow]:
    mask_seed, seed, strategy, step = cell
    return [
        ExperimentRow(
            dataset=dataset,
            strategy=strategy,
            seed=seed,
            mask_seed=mask_seed,
            step=step,
            iteration=point.it,
            queries_used=point.queries_used,
            auc_initial_pool=point.auc_initial_pool,
            auc_remaining=point.auc_remaining,
            wall_seconds_per_iteration=point.fit_seconds + point.score_seconds,
            fit_seconds=point.fit_seconds,
            score_seconds=point.score_seconds,
            fit_epochs=point.fit_epochs,
            scored=int(not (state.finished and index == len(state.trajectory) - 1)),
        )
        for index, point in enumerate(state.trajectory)
    ]


def run_experiment(
    truth: PartialNetwork, grid: ExperimentGrid, out: Optional[Path] = None
) -> ExperimentResult:
    return ExperimentService(progress=False).run_experiment(truth, grid, out)


def _frame(result: Union[ExperimentResult, pd.DataFrame]) -> pd.DataFrame:
    return result.to_frame() if isinstance(result, ExperimentResult) else result


def gain_table(result: Union[ExperimentResult, pd.DataFrame]) -> pd.DataFrame:
    """Mean AUC gain in percentage points, strategies as rows, steps as columns.

    The gain of one trajectory is its last initial-pool AUC minus its first.
    """
    frame = _frame(result).dropna(subset=["auc_initial_pool"])
    if frame.empty:
        return pd.DataFrame()
    keys = ["strategy", "step", "seed", "mask_seed"]
    ordered = frame.sort_values(keys + ["iteration"])
    grouped = ordered.groupby(keys)["auc_initial_pool"]
    gains = ((grouped.last() - grouped.first()) * 100.0).rename("gain").reset_index()
    table = gains.pivot_table(index="strategy", columns="step", values="gain", aggfunc="mean")
    return table.sort_values(table.columns[0], ascending=False)


def timing_report(result: Union[ExperimentResult, pd.DataFrame]) -> pd.DataFrame:
    """Mean scoring and fitting seconds per iteration for each strategy."""
    frame = _frame(result)
    scored = frame[frame["scored"] == 1]
    if scored.empty:
        return pd.DataFrame(columns=["score_seconds", "fit_seconds", "iterations"])
    report = scored.groupby("strategy").agg(
        score_seconds=("score_seconds", "mean"),
        fit_seconds=("fit_seconds", "mean"),
        iterations=("iteration", "count"),
    )
    return report.sort_values("score_seconds", ascending=False)
