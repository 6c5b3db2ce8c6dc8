"""Experiment grid settings and result rows."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.strategies import STRATEGY_NAMES
from src.utils.config import config

RESULT_COLUMNS = [
    "dataset",
    "strategy",
    "seed",
    "mask_seed",
    "step",
    "iteration",
    "queries_used",
    "auc_initial_pool",
    "auc_remaining",
    "wall_seconds_per_iteration",
    "fit_seconds",
    "score_seconds",
    "fit_epochs",
    "scored",
]

Cell = Tuple[int, int, str, int]


class ExperimentGrid(BaseModel):
    """Strategies x fit seeds x mask seeds x steps on one dataset."""

    model_config = ConfigDict(frozen=True)

    dataset: str = "graph"
    strategies: List[str] = Field(default_factory=lambda: list(STRATEGY_NAMES))
    seeds: List[int] = Field(default_factory=lambda: [0])
    mask_seeds: List[int] = Field(default_factory=lambda: [0])
    steps: List[int] = Field(default_factory=lambda: [10])
    hide_fraction: float = Field(0.2, gt=0.0, lt=1.0)
    budget_fraction: Optional[float] = Field(0.1, gt=0.0, le=1.0)
    budget: Optional[int] = Field(None, ge=1)
    dim: Optional[int] = Field(None, ge=1)
    gamma: Optional[float] = Field(None, gt=0.0)
    ridge: Optional[float] = Field(None, ge=0.0)
    exclude_self_pair: Optional[bool] = None
    cold_start: Optional[bool] = None
    early_stop_auc: Optional[float] = Field(None, gt=0.0, le=1.0)
    jobs: int = Field(1, ge=1)

    @field_validator("strategies")
    @classmethod
    def _known_strategies(cls, value: List[str]) -> List[str]:
        unknown = [name for name in value if name not in STRATEGY_NAMES]
        if unknown:
            raise ValueError(
                f"unknown strategies {unknown}; valid names: {', '.join(STRATEGY_NAMES)}"
            )
        return value

    @field_validator("steps")
    @classmethod
    def _positive_steps(cls, value: List[int]) -> List[int]:
        if any(step < 1 for step in value):
            raise ValueError("steps must be positive")
        return value

    def cells(self) -> Iterator[Cell]:
        """(mask_seed, seed, strategy, step) in a fixed order."""
        for mask_seed in self.mask_seeds:
            for seed in self.seeds:
                for strategy in self.strategies:
                    for step in self.steps:
                        yield mask_seed, seed, strategy, step

    @property
    def size(self) -> int:
        return len(self.mask_seeds) * len(self.seeds) * len(self.strategies) * len(self.steps)

    @classmethod
    def from_config(cls, **overrides: Any) -> "ExperimentGrid":
        campaign_cfg = config.section("campaign")
        values: Dict[str, Any] = {
            "hide_fraction": campaign_cfg.get("hide_fraction", 0.2),
            "budget_fraction": campaign_cfg.get("budget_fraction", 0.1),
            "steps": [campaign_cfg.get("step", 10)],
        }
        if overrides.get("budget") is not None:
            values["budget_fraction"] = None
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass
class ExperimentRow:
    """One trajectory point of one grid cell."""

    dataset: str
    strategy: str
    seed: int
    mask_seed: int
    step: int
    iteration: int
    queries_used: int
    auc_initial_pool: Optional[float]
    auc_remaining: Optional[float]
    wall_seconds_per_iteration: float
    fit_seconds: float
    score_seconds: float
    fit_epochs: int
    scored: int

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class CellFailure:
    dataset: str
    strategy: str
    seed: int
    mask_seed: int
    step: int
    error: str


@dataclass
class ExperimentResult:
    """Rows of every finished cell plus the cells that failed."""

    rows: List[ExperimentRow] = field(default_factory=list)
    failures: List[CellFailure] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.as_dict() for row in self.rows], columns=RESULT_COLUMNS)
