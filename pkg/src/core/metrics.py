"""Link prediction metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import rankdata

from src.core.exceptions import ContractViolation, UndefinedAucError


@dataclass
class AucInput:
    """Scored pairs with their true 0/1 labels."""

    scores: np.ndarray
    labels: np.ndarray
    pairs: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.scores = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        self.labels = np.asarray(self.labels).astype(np.int64).reshape(-1)
        if len(self.scores) != len(self.labels):
            raise ContractViolation(
                f"{len(self.scores)} scores but {len(self.labels)} labels"
            )
        if not np.isin(self.labels, (0, 1)).all():
            raise ContractViolation("labels must be 0 or 1")


def auc(data: AucInput) -> float:
    """Probability that a random positive outranks a random negative.

    Ties count one half. Computed from average ranks (Mann-Whitney U).
    """
    positives = data.labels == 1
    n_pos = int(positives.sum())
    n_neg = len(data.labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAucError(
            f"AUC needs both classes, got {n_pos} positives and {n_neg} negatives"
        )
    ranks = rankdata(data.scores, method="average")
    u_statistic = ranks[positives].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_statistic / (n_pos * n_neg))


def auc_score(scores: np.ndarray, labels: np.ndarray) -> float:
    return auc(AucInput(scores=scores, labels=labels))
