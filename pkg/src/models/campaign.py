"""Campaign configuration and state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from dataclasses_json import dataclass_json
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.pagerank import PageRankConfig
from src.core.strategies import STRATEGY_NAMES
from src.models.embedding import EmbeddingModel, FitConfig
from src.models.network import Pair, PartialNetwork
from src.utils.config import config


class CampaignConfig(BaseModel):
    """Settings of one active learning campaign."""

    model_config = ConfigDict(frozen=True)

    strategy: str = "v-opt"
    step: int = Field(10, ge=1)
    budget: Optional[int] = Field(None, ge=1)
    budget_fraction: Optional[float] = Field(None, gt=0.0, le=1.0)
    fit: FitConfig = Field(default_factory=FitConfig)
    gamma: float = Field(1.0, gt=0.0)
    ridge: float = Field(1e-4, ge=0.0)
    exclude_self_pair: bool = False
    cold_start: bool = False
    early_stop_auc: Optional[float] = Field(None, gt=0.0, le=1.0)
    seed: int = 0
    pagerank: PageRankConfig = Field(default_factory=PageRankConfig)
    oracle_retries: int = Field(3, ge=1)
    threads: Optional[int] = Field(None, ge=1)

    @field_validator("strategy")
    @classmethod
    def _known_strategy(cls, value: str) -> str:
        if value not in STRATEGY_NAMES:
            raise ValueError(f"unknown strategy {value!r}; valid names: {', '.join(STRATEGY_NAMES)}")
        return value

    @model_validator(mode="after")
    def _one_budget(self) -> "CampaignConfig":
        if self.budget is None and self.budget_fraction is None:
            raise ValueError("set either budget or budget_fraction")
        return self

    def resolve_budget(self, pool_size: int) -> int:
        """Absolute budget, never larger than the initial pool."""
        if self.budget is not None:
            wanted = self.budget
        else:
            wanted = max(1, int(np.floor(self.budget_fraction * pool_size + 0.5)))
        return min(wanted, pool_size)

    def identity(self) -> Dict[str, Any]:
        """Fields a resumed campaign must share with its checkpoint.

        Retry counts and thread caps are left out; they do not change results.
        """
        return {
            "strategy": self.strategy,
            "step": self.step,
            "budget": self.budget,
            "budget_fraction": self.budget_fraction,
            "gamma": self.gamma,
            "ridge": self.ridge,
            "exclude_self_pair": self.exclude_self_pair,
            "cold_start": self.cold_start,
            "early_stop_auc": self.early_stop_auc,
            "seed": self.seed,
            "fit": self.fit.model_dump(exclude={"init"}),
            "pagerank": self.pagerank.model_dump(),
        }

    @classmethod
    def from_config(cls, **overrides: Any) -> "CampaignConfig":
        """Defaults from the ``campaign``, ``embedding``, ``voptimality`` and ``pagerank`` sections."""
        campaign_cfg = config.section("campaign")
        embedding_cfg = config.section("embedding")
        vopt_cfg = config.section("voptimality")
        values: Dict[str, Any] = {
            "step": campaign_cfg.get("step", 10),
            "budget_fraction": campaign_cfg.get("budget_fraction", 0.1),
            "early_stop_auc": campaign_cfg.get("early_stop_auc"),
            "oracle_retries": campaign_cfg.get("oracle_retries", 3),
            "gamma": embedding_cfg.get("gamma", 1.0),
            "cold_start": not embedding_cfg.get("warm_start", True),
            "ridge": vopt_cfg.get("ridge", 1e-4),
            "exclude_self_pair": vopt_cfg.get("exclude_self_pair", False),
        }
        fit_overrides = overrides.pop("fit_overrides", {}) or {}
        values["fit"] = FitConfig.from_config(init="warm_start", **fit_overrides)
        values["pagerank"] = PageRankConfig.from_config()
        if overrides.get("budget") is not None:
            values["budget_fraction"] = None
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass_json
@dataclass
class QueryRecord:
    """One revealed pair."""

    i: int
    j: int
    status: str
    iteration: int


@dataclass_json
@dataclass
class AucPoint:
    """Link prediction quality after fitting at the start of an iteration."""

    it: int
    queries_used: int
    auc_initial_pool: Optional[float]
    auc_remaining: Optional[float]
    fit_seconds: float
    score_seconds: float = 0.0
    fit_epochs: int = 0


@dataclass
class CampaignState:
    """Everything needed to continue a campaign exactly where it stopped."""

    strategy: str
    graph_hash: str
    net: PartialNetwork
    initial_unknown: np.ndarray
    budget: int
    remaining: int
    rng: np.random.Generator
    it: int = 0
    model: Optional[EmbeddingModel] = None
    query_log: List[QueryRecord] = field(default_factory=list)
    # selected for the current iteration but not yet answered by the oracle
    pending: List[Pair] = field(default_factory=list)
    trajectory: List[AucPoint] = field(default_factory=list)
    finished: bool = False
    stop_reason: Optional[str] = None

    @property
    def queries_used(self) -> int:
        return len(self.query_log)
