"""Embedding models and fitting configuration."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.core.exceptions import ContractViolation
from src.utils.config import config


@dataclass
class FitTrace:
    """Optimisation record of one fit."""

    epochs: int
    log_likelihoods: List[float]
    converged: bool
    learning_rate: float
    subsampled: bool = False


@dataclass(frozen=True, eq=False)
class EmbeddingModel:
    """Node coordinates X (n × d) with spread gamma and global bias beta.

    Link probabilities are ``sigmoid(beta - gamma / 2 * ||x_i - x_j||^2)``.
    Instances are immutable; ``X`` is stored read-only.
    """

    X: np.ndarray
    gamma: float
    beta: float
    trace: Optional[FitTrace] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=np.float64, copy=True)
        if X.ndim != 2:
            raise ContractViolation("X must be an n × d matrix")
        if not np.all(np.isfinite(X)):
            raise ContractViolation("X must contain only finite values")
        if not self.gamma > 0:
            raise ContractViolation(f"gamma must be positive, got {self.gamma}")
        if not np.isfinite(self.beta):
            raise ContractViolation("beta must be finite")
        X.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @cached_property
    def snapshot_id(self) -> str:
        """Content id used to detect stale derived quantities."""
        digest = hashlib.sha1()
        digest.update(self.X.astype("<f8").tobytes())
        digest.update(np.array([self.gamma, self.beta], dtype="<f8").tobytes())
        return digest.hexdigest()[:16]


class FitConfig(BaseModel):
    """Gradient-ascent settings for the maximum likelihood embedding."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(8, ge=1)
    max_epochs: int = Field(500, ge=1)
    learning_rate: float = Field(0.1, gt=0.0)
    tolerance: float = Field(1e-6, gt=0.0)
    init: Literal["random_gaussian", "warm_start"] = "random_gaussian"
    init_scale: Optional[float] = Field(None, gt=0.0)
    seed: int = 0
    exact_pair_limit: int = Field(2000, ge=2)
    negatives_per_node: int = Field(50, ge=1)
    subsample: bool = True

    @property
    def scale(self) -> float:
        return self.init_scale if self.init_scale is not None else 1.0 / np.sqrt(self.dim)

    @classmethod
    def from_config(cls, **overrides: Any) -> "FitConfig":
        """Build from the ``embedding`` config section, then apply overrides."""
        section = config.section("embedding")
        values: Dict[str, Any] = {
            key: section[key] for key in cls.model_fields if key in section and section[key] is not None
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
