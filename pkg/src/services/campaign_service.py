"""Active learning campaign: embed, score, select, query, update."""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Callable, Dict, Optional

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt
from tqdm import tqdm

from src.core.cne import fit, pair_probabilities
from src.core.exceptions import (
    CampaignAborted,
    ContractViolation,
    DataError,
    OracleError,
    StateMismatchError,
    UndefinedAucError,
)
from src.core.metrics import auc_score
from src.core.network import Oracle, graph_hash, mask_pairs
from src.core.strategies import ScoringContext, get_strategy, select_top
from src.models.campaign import AucPoint, CampaignConfig, CampaignState, QueryRecord
from src.models.embedding import EmbeddingModel, FitConfig
from src.models.network import PairStatus, PartialNetwork
from src.models.scores import UtilityScores
from src.services.base_service import BaseService

CHECKPOINT_VERSION = "alpine-checkpoint v1"

ScoresCallback = Callable[[UtilityScores, CampaignState], None]


def _safe_auc(scores: np.ndarray, labels: np.ndarray) -> Optional[float]:
    try:
        return auc_score(scores, labels)
    except UndefinedAucError:
        return None


class CampaignService(BaseService):
    """Run ALPINE campaigns and persist them as resumable checkpoints."""

    def __init__(
        self,
        checkpoint_file: Optional[Path] = None,
        progress: bool = True,
    ) -> None:
        super().__init__(progress=progress)
        self.checkpoint_path = (
            self.ensure_checkpoint_dir(Path(checkpoint_file)) if checkpoint_file else None
        )

    # public API

    def start(self, net0: PartialNetwork, oracle: Oracle, cfg: CampaignConfig) -> CampaignState:
        """Initial state for a campaign on ``net0``."""
        if not net0.unknown:
            raise ContractViolation("a campaign needs a non-empty unknown pool")
        if net0.n != oracle.n:
            raise ContractViolation("oracle and network disagree on the node count")
        initial_unknown = net0.unknown_array()
        budget = cfg.resolve_budget(len(initial_unknown))
        return CampaignState(
            strategy=cfg.strategy,
            graph_hash=graph_hash(oracle.ground_truth),
            net=net0.copy(),
            initial_unknown=initial_unknown,
            budget=budget,
            remaining=budget,
            rng=np.random.default_rng(cfg.seed),
        )

    def run_campaign(
        self,
        net0: PartialNetwork,
        oracle: Oracle,
        cfg: CampaignConfig,
        max_iterations: Optional[int] = None,
        on_scores: Optional[ScoresCallback] = None,
    ) -> CampaignState:
        """Run a campaign from scratch until budget, pool or early stop."""
        state = self.start(net0, oracle, cfg)
        self._logger.info(
            "Starting campaign | strategy=%s | n=%s | unknown=%s | budget=%s | step=%s",
            cfg.strategy,
            net0.n,
            len(state.initial_unknown),
            state.budget,
            cfg.step,
        )
        return self._advance(state, oracle, cfg, max_iterations, on_scores)

    def resume(
        self,
        state: CampaignState,
        oracle: Oracle,
        cfg: CampaignConfig,
        max_iterations: Optional[int] = None,
        on_scores: Optional[ScoresCallback] = None,
    ) -> CampaignState:
        """Continue a paused or aborted campaign."""
        if cfg.strategy != state.strategy:
            raise StateMismatchError(
                f"checkpoint strategy {state.strategy} differs from requested {cfg.strategy}"
            )
        if graph_hash(oracle.ground_truth) != state.graph_hash:
            raise StateMismatchError("ground-truth graph does not match the checkpoint hash")
        if state.finished or state.remaining == 0:
            self._logger.info("Nothing to resume | remaining=%s", state.remaining)
            return state
        self._logger.info(
            "Resuming campaign | it=%s | remaining=%s", state.it, state.remaining
        )
        return self._advance(state, oracle, cfg, max_iterations, on_scores)

    # loop

    def _advance(
        self,
        state: CampaignState,
        oracle: Oracle,
        cfg: CampaignConfig,
        max_iterations: Optional[int],
        on_scores: Optional[ScoresCallback],
    ) -> CampaignState:
        strategy = get_strategy(cfg.strategy)
        labels0 = oracle.labels(state.initial_unknown)
        completed = 0

        progress = tqdm(
            total=state.budget,
            initial=state.queries_used,
            desc=cfg.strategy,
            unit="query",
            leave=False,
            disable=not self.progress,
        )
        try:
            if state.pending:
                self._logger.info(
                    "Completing interrupted batch | it=%s | pending=%s", state.it, len(state.pending)
                )
                progress.update(self._query(state, oracle, cfg))
                self._end_iteration(state, cfg)

            while not state.finished:
                if max_iterations is not None and completed >= max_iterations:
                    self._logger.info("Campaign paused | it=%s", state.it)
                    break

                fit_start = time.perf_counter()
                state.model = fit(
                    state.net, self._fit_config(state, cfg), cfg.gamma, warm_start=state.model
                )
                point = self._evaluate(state, labels0, oracle, time.perf_counter() - fit_start)

                reason = self._stop_reason(state, cfg, point)
                if reason is not None:
                    state.trajectory.append(point)
                    state.finished = True
                    state.stop_reason = reason
                    break

                score_start = time.perf_counter()
                scores = strategy.score(
                    ScoringContext(
                        net=state.net,
                        model=state.model,
                        rng=state.rng,
                        iteration=state.it,
                        ridge=cfg.ridge,
                        exclude_self_pair=cfg.exclude_self_pair,
                        pagerank=cfg.pagerank,
                        threads=cfg.threads,
                    )
                )
                point.score_seconds = time.perf_counter() - score_start
                state.trajectory.append(point)
                if on_scores is not None:
                    on_scores(scores, state)

                state.pending = select_top(scores, cfg.step, state.remaining)
                revealed = self._query(state, oracle, cfg)
                progress.update(revealed)
                completed += 1

                self._logger.debug(
                    "Campaign iteration | it=%s | revealed=%s | remaining=%s | auc=%s",
                    state.it,
                    revealed,
                    state.remaining,
                    point.auc_initial_pool,
                )
                self._end_iteration(state, cfg)
        finally:
            progress.close()

        if state.finished:
            final = state.trajectory[-1]
            self._logger.info(
                "Campaign finished | strategy=%s | iterations=%s | queries=%s | reason=%s | auc=%s",
                cfg.strategy,
                state.it,
                state.queries_used,
                state.stop_reason,
                final.auc_initial_pool,
            )
            if self.checkpoint_path is not None:
                self.save_checkpoint(state, cfg, self.checkpoint_path)
        return state

    def _fit_config(self, state: CampaignState, cfg: CampaignConfig) -> FitConfig:
        if state.model is None:
            return cfg.fit.model_copy(update={"init": "random_gaussian"})
        if cfg.cold_start:
            seed = int(np.random.SeedSequence([cfg.fit.seed, state.it]).generate_state(1)[0])
            return cfg.fit.model_copy(update={"init": "random_gaussian", "seed": seed})
        return cfg.fit.model_copy(update={"init": "warm_start"})

    def _evaluate(
        self,
        state: CampaignState,
        labels0: np.ndarray,
        oracle: Oracle,
        fit_seconds: float,
    ) -> AucPoint:
        model = state.model
        initial = _safe_auc(pair_probabilities(model, state.initial_unknown), labels0)
        remaining_pairs = state.net.unknown_array()
        remaining = None
        if len(remaining_pairs):
            remaining = _safe_auc(
                pair_probabilities(model, remaining_pairs), oracle.labels(remaining_pairs)
            )
        return AucPoint(
            it=state.it,
            queries_used=state.queries_used,
            auc_initial_pool=initial,
            auc_remaining=remaining,
            fit_seconds=fit_seconds,
            fit_epochs=model.trace.epochs if model.trace is not None else 0,
        )

    @staticmethod
    def _stop_reason(state: CampaignState, cfg: CampaignConfig, point: AucPoint) -> Optional[str]:
        if state.remaining == 0:
            return "budget"
        if not state.net.unknown:
            return "pool"
        if (
            cfg.early_stop_auc is not None
            and point.auc_initial_pool is not None
            and point.auc_initial_pool >= cfg.early_stop_auc
        ):
            return "early_stop"
        return None

    def _end_iteration(self, state: CampaignState, cfg: CampaignConfig) -> None:
        state.it += 1
        if self.checkpoint_path is not None:
            self.save_checkpoint(state, cfg, self.checkpoint_path)

    def _query(self, state: CampaignState, oracle: Oracle, cfg: CampaignConfig) -> int:
        """Reveal the pending batch in order; an exhausted oracle leaves the rest pending."""
        revealed = 0
        while state.pending:
            pair = state.pending[0]
            try:
                for attempt in Retrying(
                    stop=stop_after_attempt(cfg.oracle_retries),
                    retry=retry_if_exception_type(OracleError),
                    reraise=True,
                ):
                    with attempt:
                        status = oracle.query(pair)
            except OracleError as exc:
                if self.checkpoint_path is not None:
                    self.save_checkpoint(state, cfg, self.checkpoint_path)
                raise CampaignAborted(
                    f"oracle failed on pair {pair} after {cfg.oracle_retries} attempts: {exc}",
                    state=state,
                ) from exc
            state.net.reveal_in_place(pair, status)
            state.query_log.append(
                QueryRecord(i=pair[0], j=pair[1], status=status.value, iteration=state.it)
            )
            state.remaining -= 1
            state.pending.pop(0)
            revealed += 1
        return revealed

    # checkpoints

    def save_checkpoint(self, state: CampaignState, cfg: CampaignConfig, path: Path) -> Path:
        """Write the state as versioned JSON; floats round-trip exactly."""
        payload: Dict[str, object] = {
            "version": CHECKPOINT_VERSION,
            "graph_hash": state.graph_hash,
            "config": cfg.identity(),
            "n": state.net.n,
            "initial_unknown": state.initial_unknown.tolist(),
            "budget": state.budget,
            "remaining": state.remaining,
            "it": state.it,
            "finished": state.finished,
            "stop_reason": state.stop_reason,
            "query_log": [record.to_dict() for record in state.query_log],
            "pending": [list(pair) for pair in state.pending],
            "trajectory": [point.to_dict() for point in state.trajectory],
            "rng_state": state.rng.bit_generator.state,
            "model": None,
        }
        if state.model is not None:
            payload["model"] = {
                "X": state.model.X.tolist(),
                "gamma": state.model.gamma,
                "beta": state.model.beta,
            }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            with path.open("w", encoding="utf-8") as handler:
                json.dump(payload, handler)
        except OSError as exc:
            raise DataError(f"Cannot write checkpoint file {path}: {exc}") from exc
        return path

    def load_checkpoint(self, path: Path, oracle: Oracle, cfg: CampaignConfig) -> CampaignState:
        """Rebuild a state; refuses checkpoints of another graph or config."""
        path = Path(path)
        try:
            with path.open("r", encoding="utf-8") as handler:
                payload = json.load(handler)
        except json.JSONDecodeError as exc:
            raise DataError(f"Invalid checkpoint file {path}: {exc}") from exc
        except OSError as exc:
            raise DataError(f"Cannot read checkpoint file {path}: {exc}") from exc

        if not isinstance(payload, dict) or payload.get("version") != CHECKPOINT_VERSION:
            raise DataError(f"{path} is not a {CHECKPOINT_VERSION} file")
        if payload["graph_hash"] != graph_hash(oracle.ground_truth):
            raise StateMismatchError(f"{path} was written for a different graph")
        if payload["config"] != cfg.identity():
            raise StateMismatchError(
                f"{path} was written with config {payload['config']}, got {cfg.identity()}"
            )

        initial_unknown = [tuple(pair) for pair in payload["initial_unknown"]]
        net, _ = mask_pairs(oracle.ground_truth, initial_unknown)
        query_log = [QueryRecord.from_dict(record) for record in payload["query_log"]]
        for record in query_log:
            net.reveal_in_place((record.i, record.j), PairStatus(record.status))

        rng = np.random.default_rng()
        rng.bit_generator.state = payload["rng_state"]
        model = None
        if payload.get("model") is not None:
            model = EmbeddingModel(
                X=np.array(payload["model"]["X"], dtype=np.float64),
                gamma=payload["model"]["gamma"],
                beta=payload["model"]["beta"],
            )
        return CampaignState(
            strategy=payload["config"]["strategy"],
            graph_hash=payload["graph_hash"],
            net=net,
            initial_unknown=np.array(initial_unknown, dtype=np.int64).reshape(-1, 2),
            budget=int(payload["budget"]),
            remaining=int(payload["remaining"]),
            rng=rng,
            it=int(payload["it"]),
            model=model,
            query_log=query_log,
            pending=[(int(i), int(j)) for i, j in payload.get("pending", [])],
            trajectory=[AucPoint.from_dict(point) for point in payload["trajectory"]],
            finished=bool(payload["finished"]),
            stop_reason=payload.get("stop_reason"),
        )


def run_campaign(
    net0: PartialNetwork, oracle: Oracle, cfg: CampaignConfig, **kwargs
) -> CampaignState:
    return CampaignService(progress=False).run_campaign(net0, oracle, cfg, **kwargs)


def resume(state: CampaignState, oracle: Oracle, cfg: CampaignConfig, **kwargs) -> CampaignState:
    return CampaignService(progress=False).resume(state, oracle, cfg, **kwargs)
