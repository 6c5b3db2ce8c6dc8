"""Query strategies: utilities over the unknown pool and top-s selection."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar, Dict, List, Optional, Tuple, Type, Union

import numpy as np
from scipy.special import entr

from src.core.cne import link_probability, pair_probabilities
from src.core.exceptions import ConfigurationError, ContractViolation
from src.core.pagerank import PageRankConfig, pagerank
from src.core.voptimality import DEFAULT_RIDGE, score_all_vopt
from src.models.embedding import EmbeddingModel
from src.models.network import Pair, PartialNetwork, normalize_pair
from src.models.scores import UtilityScores


# per-pair utilities

def entropy_utility(model: EmbeddingModel, i: int, j: int) -> float:
    """Binary entropy (nats) of the predicted link status."""
    P = link_probability(model, i, j)
    return float(entr(P) + entr(1.0 - P))


def prob_utility(model: EmbeddingModel, i: int, j: int) -> float:
    return link_probability(model, i, j)


def distance_utility(model: EmbeddingModel, i: int, j: int) -> float:
    """Negative Euclidean distance of the two embeddings."""
    i, j = normalize_pair(i, j)
    return -float(np.linalg.norm(model.X[i] - model.X[j]))


def degree_utility(net: PartialNetwork, i: int, j: int) -> float:
    """Sum of the observed degrees (links in E) of both endpoints."""
    i, j = normalize_pair(i, j)
    return float(net.degree(i) + net.degree(j))


def pagerank_utility(
    net: PartialNetwork, i: int, j: int, cfg: PageRankConfig = PageRankConfig()
) -> float:
    i, j = normalize_pair(i, j)
    scores = pagerank(net, cfg)
    return float(scores[i] + scores[j])


def random_utility(seed: Union[int, np.random.Generator], pairs: np.ndarray) -> np.ndarray:
    """I.i.d. uniform scores in [0, 1), one per row of ``pairs``.

    ``seed`` is either a seed or a generator whose stream is consumed.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.random(len(pairs))


# strategies over the whole pool

@dataclass
class ScoringContext:
    """Frozen inputs of one scoring pass."""

    net: PartialNetwork
    model: Optional[EmbeddingModel] = None
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    iteration: int = 0
    ridge: float = DEFAULT_RIDGE
    exclude_self_pair: bool = False
    pagerank: PageRankConfig = field(default_factory=PageRankConfig)
    threads: Optional[int] = None


class QueryStrategy(ABC):
    """Pool-based query strategy scoring every pair of U."""

    name: ClassVar[str]
    needs_embedding: ClassVar[bool] = False

    def score(self, context: ScoringContext) -> UtilityScores:
        if self.needs_embedding and context.model is None:
            raise ContractViolation(f"strategy {self.name} needs a fitted embedding")
        pairs = context.net.unknown_array()
        values = self._scores(context, pairs) if len(pairs) else np.empty(0)
        return UtilityScores(
            strategy=self.name,
            pairs=pairs,
            scores=values,
            iteration=context.iteration,
            snapshot_id=context.model.snapshot_id if context.model is not None else None,
        )

    @abstractmethod
    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        """Utility of each row of ``pairs``."""


class RandomStrategy(QueryStrategy):
    name = "rand"

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        return random_utility(context.rng, pairs)


class MaxDegreeStrategy(QueryStrategy):
    name = "max-deg"

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        degrees = context.net.degrees().astype(np.float64)
        return degrees[pairs[:, 0]] + degrees[pairs[:, 1]]


class PageRankStrategy(QueryStrategy):
    name = "page-rank"

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        ranks = pagerank(context.net, context.pagerank)
        return ranks[pairs[:, 0]] + ranks[pairs[:, 1]]


class MinDistanceStrategy(QueryStrategy):
    name = "min-dis"
    needs_embedding = True

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        X = context.model.X
        return -np.linalg.norm(X[pairs[:, 0]] - X[pairs[:, 1]], axis=1)


class MaxProbabilityStrategy(QueryStrategy):
    name = "max-prob"
    needs_embedding = True

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        return pair_probabilities(context.model, pairs)


class MaxEntropyStrategy(QueryStrategy):
    name = "max-ent"
    needs_embedding = True

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        P = pair_probabilities(context.model, pairs)
        return entr(P) + entr(1.0 - P)


class VOptimalityStrategy(QueryStrategy):
    name = "v-opt"
    needs_embedding = True

    def score(self, context: ScoringContext) -> UtilityScores:
        if context.model is None:
            raise ContractViolation("strategy v-opt needs a fitted embedding")
        return score_all_vopt(
            context.model,
            context.net,
            ridge=context.ridge,
            exclude_self_pair=context.exclude_self_pair,
            iteration=context.iteration,
            threads=context.threads,
        )

    def _scores(self, context: ScoringContext, pairs: np.ndarray) -> np.ndarray:
        return self.score(context).scores


_REGISTRY: Dict[str, Type[QueryStrategy]] = {
    cls.name: cls
    for cls in (
        RandomStrategy,
        MaxDegreeStrategy,
        PageRankStrategy,
        MinDistanceStrategy,
        MaxProbabilityStrategy,
        MaxEntropyStrategy,
        VOptimalityStrategy,
    )
}

STRATEGY_NAMES: Tuple[str, ...] = tuple(_REGISTRY)


def get_strategy(name: str) -> QueryStrategy:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ConfigurationError(
            f"unknown strategy {name!r}; valid names: {', '.join(STRATEGY_NAMES)}"
        ) from None


def select_top(scores: UtilityScores, s: int, B: int) -> List[Pair]:
    """The min(s, B, |U|) best pairs, descending score, ties by (i, j)."""
    if s < 1 or B < 1:
        raise ContractViolation(f"step and budget must be positive, got s={s}, B={B}")
    order = scores.ranking()[: min(s, B)]
    return [(int(i), int(j)) for i, j in scores.pairs[order]]
