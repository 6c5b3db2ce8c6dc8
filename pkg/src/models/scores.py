"""Covariance snapshots and utility score tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from src.core.exceptions import ContractViolation, NumericalError

SCORE_COLUMNS = ["i", "j", "score", "strategy", "iteration"]


@dataclass(frozen=True, eq=False)
class NodeCovariance:
    """Observed information of one node embedding and its ridge inverse."""

    node: int
    info: np.ndarray
    cov: np.ndarray
    ridge: float


@dataclass(frozen=True, eq=False)
class CovarianceTable:
    """Per-node covariances computed from one model snapshot."""

    snapshot_id: str
    infos: np.ndarray
    covariances: np.ndarray
    ridge: float

    def __len__(self) -> int:
        return self.covariances.shape[0]

    def __getitem__(self, node: int) -> NodeCovariance:
        return NodeCovariance(
            node=int(node),
            info=self.infos[node],
            cov=self.covariances[node],
            ridge=self.ridge,
        )


@dataclass(eq=False)
class UtilityScores:
    """One score per candidate pair of U, produced by a named strategy."""

    strategy: str
    pairs: np.ndarray
    scores: np.ndarray
    iteration: int = 0
    snapshot_id: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        self.scores = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        if len(self.pairs) != len(self.scores):
            raise ContractViolation(
                f"{len(self.pairs)} pairs but {len(self.scores)} scores"
            )
        if not np.all(np.isfinite(self.scores)):
            raise NumericalError(f"strategy {self.strategy} produced non-finite scores")

    def __len__(self) -> int:
        return len(self.scores)

    def ranking(self) -> np.ndarray:
        """Indices by descending score, ties broken by (i, j) ascending."""
        if len(self.scores) == 0:
            return np.empty(0, dtype=np.int64)
        return np.lexsort((self.pairs[:, 1], self.pairs[:, 0], -self.scores))

    def as_dict(self) -> Dict[Tuple[int, int], float]:
        return {
            (int(i), int(j)): float(score)
            for (i, j), score in zip(self.pairs, self.scores)
        }

    def to_frame(self) -> pd.DataFrame:
        """Ranked table with the score-dump columns."""
        order = self.ranking()
        return pd.DataFrame(
            {
                "i": self.pairs[order, 0],
                "j": self.pairs[order, 1],
                "score": self.scores[order],
                "strategy": self.strategy,
                "iteration": self.iteration,
            },
            columns=SCORE_COLUMNS,
        )
