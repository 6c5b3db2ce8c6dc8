"""New-node study: which partners does a strategy ask about first?"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import pandas as pd

from src.core.exceptions import ProtocolError
from src.core.network import apply_mask
from src.models.campaign import CampaignConfig, CampaignState
from src.models.network import MaskSpec, PartialNetwork
from src.models.scores import UtilityScores
from src.services.base_service import BaseService
from src.services.campaign_service import CampaignService

RANKING_COLUMNS = ["iteration", "partner", "label", "score", "rank", "observed_degree", "connected"]


@dataclass
class NewNodeStudy:
    """Per-iteration candidate rankings of the new node's pairs."""

    node: int
    anchor: int
    strategy: str
    rankings: List[pd.DataFrame] = field(default_factory=list)
    state: Optional[CampaignState] = None

    def top(self) -> pd.DataFrame:
        """Best-ranked partner of every iteration."""
        if not self.rankings:
            return pd.DataFrame(columns=RANKING_COLUMNS)
        return pd.concat([frame.head(1) for frame in self.rankings], ignore_index=True)

    def to_frame(self) -> pd.DataFrame:
        if not self.rankings:
            return pd.DataFrame(columns=RANKING_COLUMNS)
        return pd.concat(self.rankings, ignore_index=True)


class StudyService(BaseService):
    """Hide every pair of one node except a known anchor link, then query one pair at a time."""

    def new_node_study(
        self,
        truth: PartialNetwork,
        node: int,
        anchor: int,
        strategy: str = "v-opt",
        iters: int = 5,
        seed: int = 0,
        **overrides,
    ) -> NewNodeStudy:
        node = truth.check_node(node)
        anchor = truth.check_node(anchor)
        if anchor not in truth.edge_partners(node):
            raise ProtocolError(
                f"anchor {truth.label_of(anchor)} is not linked to node {truth.label_of(node)}"
            )

        net0, oracle = apply_mask(
            truth, MaskSpec(mode="new_node", node=node, anchor=anchor, seed=seed)
        )
        cfg = CampaignConfig.from_config(
            strategy=strategy,
            step=1,
            budget=min(iters, len(net0.unknown)),
            seed=seed,
            fit_overrides={"seed": seed, **overrides.pop("fit_overrides", {})},
            **overrides,
        )
        study = NewNodeStudy(node=node, anchor=anchor, strategy=strategy)

        def record(scores: UtilityScores, state: CampaignState) -> None:
            frame = self._ranking(truth, node, scores, state)
            study.rankings.append(frame)
            best = frame.iloc[0]
            self._logger.info(
                "New-node ranking | it=%s | strategy=%s | top=%s | score=%.6g | connected=%s",
                scores.iteration,
                strategy,
                best["label"],
                best["score"],
                bool(best["connected"]),
            )

        study.state = CampaignService(progress=False).run_campaign(
            net0, oracle, cfg, on_scores=record
        )
        return study

    @staticmethod
    def _ranking(
        truth: PartialNetwork,
        node: int,
        scores: UtilityScores,
        state: CampaignState,
    ) -> pd.DataFrame:
        degrees = state.net.degrees()
        rows = []
        for rank, index in enumerate(scores.ranking(), start=1):
            i, j = (int(v) for v in scores.pairs[index])
            partner = j if i == node else i
            rows.append(
                {
                    "iteration": scores.iteration,
                    "partner": partner,
                    "label": truth.label_of(partner),
                    "score": float(scores.scores[index]),
                    "rank": rank,
                    "observed_degree": int(degrees[partner]),
                    "connected": int(partner in truth.edge_partners(node)),
                }
            )
        return pd.DataFrame(rows, columns=RANKING_COLUMNS)


def new_node_study(
    truth: PartialNetwork,
    node: int,
    anchor: int,
    strategy: str = "v-opt",
    iters: int = 5,
    **kwargs,
) -> NewNodeStudy:
    return StudyService(progress=False).new_node_study(truth, node, anchor, strategy, iters, **kwargs)
