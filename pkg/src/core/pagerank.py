"""PageRank of the observed links, unknown pairs counted as disconnected."""

from __future__ import annotations

from typing import Any

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field

from src.models.network import PartialNetwork
from src.utils.config import config
from src.utils.logger import logger

_logger = logger.getChild("pagerank")


class PageRankConfig(BaseModel):
    """Power iteration settings."""

    model_config = ConfigDict(frozen=True)

    damping: float = Field(0.85, gt=0.0, lt=1.0)
    max_iters: int = Field(200, ge=1)
    tolerance: float = Field(1e-10, gt=0.0)

    @classmethod
    def from_config(cls, **overrides: Any) -> "PageRankConfig":
        values = {k: v for k, v in config.section("pagerank").items() if k in cls.model_fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def transition_matrix(net: PartialNetwork) -> sp.csr_matrix:
    """Row-stochastic transition matrix of (V, E); dangling rows stay empty."""
    edges = net.edge_array()
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    degree = np.bincount(rows, minlength=net.n).astype(np.float64)
    weights = 1.0 / degree[rows] if len(rows) else np.empty(0)
    return sp.csr_matrix((weights, (rows, cols)), shape=(net.n, net.n))


def pagerank(net: PartialNetwork, cfg: PageRankConfig = PageRankConfig()) -> np.ndarray:
    """PageRank vector with uniform teleport and uniform dangling redistribution."""
    n = net.n
    if n == 0:
        return np.empty(0)
    M = transition_matrix(net)
    dangling = np.asarray(M.sum(axis=1)).ravel() == 0
    x = np.full(n, 1.0 / n)
    for iteration in range(1, cfg.max_iters + 1):
        previous = x
        x = cfg.damping * (M.T @ previous + previous[dangling].sum() / n) + (1.0 - cfg.damping) / n
        x = x / x.sum()
        if np.abs(x - previous).sum() < cfg.tolerance:
            _logger.debug("PageRank converged | iterations=%s", iteration)
            return x
    _logger.warning(
        "PageRank did not converge | max_iters=%s | tolerance=%s; using last iterate",
        cfg.max_iters,
        cfg.tolerance,
    )
    return x
