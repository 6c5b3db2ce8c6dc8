"""Partially observed network models."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Literal, Optional, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.exceptions import ContractViolation

Pair = Tuple[int, int]


class PairStatus(str, Enum):
    """Connectivity status of an unordered node pair."""

    CONNECTED = "connected"
    DISCONNECTED = "disconnected"
    UNKNOWN = "unknown"


def normalize_pair(i: int, j: int) -> Pair:
    """Return the canonical (min, max) key of an unordered pair."""
    i, j = int(i), int(j)
    if i == j:
        raise ContractViolation(f"self-pair ({i}, {i}) is not a node pair")
    return (i, j) if i < j else (j, i)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@dataclass
class PartialNetwork:
    """Undirected network whose pairs are connected, disconnected or unknown.

    Only E and U are stored; every other pair is disconnected. Pairs are kept
    as canonical ``(i, j)`` tuples with ``i < j``.
    """

    n: int
    edges: Set[Pair] = field(default_factory=set)
    unknown: Set[Pair] = field(default_factory=set)
    node_labels: Optional[List[str]] = None
    _edge_adj: Dict[int, Set[int]] = field(init=False, repr=False, compare=False)
    _unknown_adj: Dict[int, Set[int]] = field(init=False, repr=False, compare=False)
    # sorted E and U arrays, dropped whenever a pair is revealed
    _arrays: Dict[str, np.ndarray] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ContractViolation("node count must be non-negative")
        self.edges = {self.canonical(pair) for pair in self.edges}
        self.unknown = {self.canonical(pair) for pair in self.unknown}
        overlap = self.edges & self.unknown
        if overlap:
            raise ContractViolation(
                f"pairs cannot be both connected and unknown: {sorted(overlap)[:5]}"
            )
        if self.node_labels is not None and len(self.node_labels) != self.n:
            raise ContractViolation("node_labels must have one entry per node")
        self._edge_adj = {}
        self._unknown_adj = {}
        self._arrays = {}
        for i, j in self.edges:
            self._edge_adj.setdefault(i, set()).add(j)
            self._edge_adj.setdefault(j, set()).add(i)
        for i, j in self.unknown:
            self._unknown_adj.setdefault(i, set()).add(j)
            self._unknown_adj.setdefault(j, set()).add(i)

    def canonical(self, pair: Iterable[int]) -> Pair:
        i, j = normalize_pair(*pair)
        if i < 0 or j >= self.n:
            raise ContractViolation(f"pair ({i}, {j}) outside node range 0..{self.n - 1}")
        return (i, j)

    @property
    def n_pairs(self) -> int:
        return pair_count(self.n)

    @property
    def n_disconnected(self) -> int:
        return self.n_pairs - len(self.edges) - len(self.unknown)

    @property
    def is_fully_observed(self) -> bool:
        return not self.unknown

    def check_node(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise ContractViolation(f"node {i} outside range 0..{self.n - 1}")
        return i

    def status(self, i: int, j: int) -> PairStatus:
        pair = self.canonical((i, j))
        if pair in self.edges:
            return PairStatus.CONNECTED
        if pair in self.unknown:
            return PairStatus.UNKNOWN
        return PairStatus.DISCONNECTED

    def edge_partners(self, i: int) -> Set[int]:
        return self._edge_adj.get(self.check_node(i), set())

    def unknown_partners(self, i: int) -> Set[int]:
        return self._unknown_adj.get(self.check_node(i), set())

    def degree(self, i: int) -> int:
        """Observed degree: number of links in E incident to i."""
        return len(self.edge_partners(i))

    def degrees(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        for i, partners in self._edge_adj.items():
            out[i] = len(partners)
        return out

    def unknown_degrees(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        for i, partners in self._unknown_adj.items():
            out[i] = len(partners)
        return out

    def edge_array(self) -> np.ndarray:
        """E as a lexicographically sorted, read-only ``(m, 2)`` integer array."""
        return self._cached("edges", self.edges)

    def unknown_array(self) -> np.ndarray:
        """U as a lexicographically sorted, read-only ``(m, 2)`` integer array."""
        return self._cached("unknown", self.unknown)

    def _cached(self, key: str, pairs: Set[Pair]) -> np.ndarray:
        if key not in self._arrays:
            array = _sorted_pairs(pairs)
            array.flags.writeable = False
            self._arrays[key] = array
        return self._arrays[key]

    def label_of(self, i: int) -> str:
        i = self.check_node(i)
        return self.node_labels[i] if self.node_labels is not None else str(i)

    def index_of(self, label: str) -> int:
        """Map an external node id to its dense index."""
        if self.node_labels is None:
            try:
                return self.check_node(int(label))
            except ValueError as exc:
                raise ContractViolation(f"unknown node id {label!r}") from exc
        try:
            return self.node_labels.index(str(label))
        except ValueError as exc:
            raise ContractViolation(f"unknown node id {label!r}") from exc

    def copy(self) -> "PartialNetwork":
        return PartialNetwork(
            n=self.n,
            edges=set(self.edges),
            unknown=set(self.unknown),
            node_labels=list(self.node_labels) if self.node_labels is not None else None,
        )

    def reveal_in_place(self, pair: Pair, status: PairStatus) -> None:
        """Move ``pair`` out of U. Only the single-writer loop controller calls this."""
        i, j = self.canonical(pair)
        if (i, j) not in self.unknown:
            raise ContractViolation(f"pair ({i}, {j}) is not unknown")
        if status == PairStatus.UNKNOWN:
            raise ContractViolation("a revealed status must be connected or disconnected")
        self._arrays.clear()
        self.unknown.remove((i, j))
        self._unknown_adj[i].discard(j)
        self._unknown_adj[j].discard(i)
        if status == PairStatus.CONNECTED:
            self.edges.add((i, j))
            self._edge_adj.setdefault(i, set()).add(j)
            self._edge_adj.setdefault(j, set()).add(i)


def _sorted_pairs(pairs: Set[Pair]) -> np.ndarray:
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(sorted(pairs), dtype=np.int64)


class MaskSpec(BaseModel):
    """How an experiment instance is carved out of a fully observed network."""

    model_config = ConfigDict(frozen=True)

    hide_fraction: float = Field(0.2, gt=0.0, lt=1.0)
    seed: int = 0
    mode: Literal["uniform_pairs", "new_node"] = "uniform_pairs"
    node: Optional[int] = None
    anchor: Optional[int] = None

    @model_validator(mode="after")
    def _check_new_node(self) -> "MaskSpec":
        if self.mode == "new_node":
            if self.node is None or self.anchor is None:
                raise ValueError("new_node mode needs both node and anchor")
            if self.node == self.anchor:
                raise ValueError("anchor must differ from the new node")
        return self
