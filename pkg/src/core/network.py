"""Partially observed network construction, masking and oracle queries."""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Tuple, Union

import numpy as np

from src.core.exceptions import ContractViolation, DataError, GraphParseError
from src.models.network import (
    MaskSpec,
    Pair,
    PairStatus,
    PartialNetwork,
    normalize_pair,
)
from src.utils.logger import logger

_logger = logger.getChild("network")

COMMENT_PREFIXES = ("#", "%")


def load_edge_list(path: Union[str, Path]) -> PartialNetwork:
    """Read a whitespace separated edge list into a fully observed network.

    Integer node ids are indexed in numeric order, any other ids in order of
    first appearance. Self-loops and duplicate edges are dropped.
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise DataError(f"Cannot read edge list {path}: {exc}") from exc

    raw_pairs: List[Tuple[str, str]] = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise GraphParseError(
                f"{path}:{number}: expected 2 node tokens, got {len(tokens)}: {stripped!r}"
            )
        raw_pairs.append((tokens[0], tokens[1]))

    labels = _ordered_labels(raw_pairs)
    index: Dict[str, int] = {label: position for position, label in enumerate(labels)}

    edges = set()
    self_loops = 0
    duplicates = 0
    for left, right in raw_pairs:
        i, j = index[left], index[right]
        if i == j:
            self_loops += 1
            continue
        pair = normalize_pair(i, j)
        if pair in edges:
            duplicates += 1
            continue
        edges.add(pair)

    if self_loops or duplicates:
        _logger.warning(
            "Dropped edges while loading %s | self_loops=%s | duplicates=%s",
            path,
            self_loops,
            duplicates,
        )

    network = PartialNetwork(n=len(labels), edges=edges, node_labels=labels)
    _logger.debug(
        "Loaded edge list | path=%s | n=%s | edges=%s", path, network.n, len(edges)
    )
    return network


def _ordered_labels(raw_pairs: List[Tuple[str, str]]) -> List[str]:
    seen: Dict[str, None] = {}
    for left, right in raw_pairs:
        seen.setdefault(left)
        seen.setdefault(right)
    labels = list(seen)
    try:
        return sorted(labels, key=int)
    except ValueError:
        return labels


def pair_index(pairs: np.ndarray, n: int) -> np.ndarray:
    """Linear index of canonical pairs in row-major upper-triangle order."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    i, j = pairs[:, 0], pairs[:, 1]
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def pairs_from_index(index: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`pair_index`."""
    k = np.asarray(index, dtype=np.int64)
    root = np.sqrt(-8.0 * k + 4.0 * n * (n - 1) - 7.0)
    i = (n - 2 - np.floor(root / 2.0 - 0.5)).astype(np.int64)
    # floating point can put i one row off for large n
    i = np.where(i * (2 * n - i - 1) // 2 > k, i - 1, i)
    i = np.where((i + 1) * (2 * n - i - 2) // 2 <= k, i + 1, i)
    offset = i * (2 * n - i - 1) // 2
    j = k - offset + i + 1
    return np.stack([i, j], axis=1)


class Oracle:
    """Answers connectivity queries from a held-out fully observed network."""

    def __init__(self, ground_truth: PartialNetwork) -> None:
        if not ground_truth.is_fully_observed:
            raise ContractViolation("oracle ground truth must be fully observed")
        self.ground_truth = ground_truth
        self.queries = 0
        self._edge_keys = np.sort(pair_index(ground_truth.edge_array(), ground_truth.n))

    @property
    def n(self) -> int:
        return self.ground_truth.n

    def query(self, pair: Pair) -> PairStatus:
        """Reveal the true status of one pair; counted as a query."""
        i, j = normalize_pair(*pair)
        self.queries += 1
        if (i, j) in self.ground_truth.edges:
            return PairStatus.CONNECTED
        return PairStatus.DISCONNECTED

    def labels(self, pairs: np.ndarray) -> np.ndarray:
        """Ground-truth 0/1 labels for evaluation; not counted as queries."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if len(pairs) == 0:
            return np.empty(0, dtype=np.int64)
        keys = pair_index(np.sort(pairs, axis=1), self.n)
        return np.isin(keys, self._edge_keys).astype(np.int64)


def apply_mask(net: PartialNetwork, spec: MaskSpec) -> Tuple[PartialNetwork, Oracle]:
    """Hide pairs of a fully observed network, returning the PON and its oracle."""
    if not net.is_fully_observed:
        raise ContractViolation("apply_mask needs a fully observed network")

    if spec.mode == "uniform_pairs":
        total = net.n_pairs
        hidden = int(np.floor(spec.hide_fraction * total + 0.5))
        if hidden == 0:
            raise ContractViolation(
                f"hide_fraction={spec.hide_fraction} hides no pair of {total}"
            )
        rng = np.random.default_rng(spec.seed)
        chosen = rng.choice(total, size=hidden, replace=False)
        unknown = {(int(i), int(j)) for i, j in pairs_from_index(chosen, net.n)}
    else:
        node = net.check_node(spec.node)
        anchor = net.check_node(spec.anchor)
        unknown = {
            normalize_pair(node, other)
            for other in range(net.n)
            if other not in (node, anchor)
        }
        if not unknown:
            raise ContractViolation("new_node mask leaves no pair unknown")

    masked, oracle = mask_pairs(net, unknown)
    _logger.debug(
        "Applied mask | mode=%s | seed=%s | unknown=%s | hidden_links=%s",
        spec.mode,
        spec.seed,
        len(unknown),
        len(net.edges) - len(masked.edges),
    )
    return masked, oracle


def mask_pairs(net: PartialNetwork, unknown: Iterable[Pair]) -> Tuple[PartialNetwork, Oracle]:
    """Mark the given pairs of a fully observed network as unknown."""
    if not net.is_fully_observed:
        raise ContractViolation("masking needs a fully observed network")
    unknown = {net.canonical(pair) for pair in unknown}
    if not unknown:
        raise ContractViolation("mask leaves no pair unknown")
    masked = PartialNetwork(
        n=net.n,
        edges=net.edges - unknown,
        unknown=unknown,
        node_labels=list(net.node_labels) if net.node_labels is not None else None,
    )
    return masked, Oracle(net)


def reveal(net: PartialNetwork, pair: Pair, status: PairStatus) -> PartialNetwork:
    """Return a copy of ``net`` with ``pair`` moved from U to E or D."""
    updated = net.copy()
    updated.reveal_in_place(pair, status)
    return updated


def observed_neighbors(net: PartialNetwork, i: int) -> Iterator[Tuple[int, int]]:
    """Yield ``(j, a_ij)`` for every pair {i, j} outside U, in increasing j."""
    i = net.check_node(i)
    linked = net.edge_partners(i)
    hidden = net.unknown_partners(i)
    for j in range(net.n):
        if j == i or j in hidden:
            continue
        yield j, 1 if j in linked else 0


def observed_mask(net: PartialNetwork) -> np.ndarray:
    """Dense symmetric boolean matrix of observed pairs (E ∪ D)."""
    mask = ~np.eye(net.n, dtype=bool)
    unknown = net.unknown_array()
    if len(unknown):
        mask[unknown[:, 0], unknown[:, 1]] = False
        mask[unknown[:, 1], unknown[:, 0]] = False
    return mask


def adjacency(net: PartialNetwork) -> np.ndarray:
    """Dense symmetric 0/1 adjacency of E."""
    matrix = np.zeros((net.n, net.n), dtype=np.float64)
    edges = net.edge_array()
    if len(edges):
        matrix[edges[:, 0], edges[:, 1]] = 1.0
        matrix[edges[:, 1], edges[:, 0]] = 1.0
    return matrix


def graph_hash(net: PartialNetwork) -> str:
    """Content hash of (n, E, U), stable across processes."""
    digest = hashlib.sha256()
    digest.update(str(net.n).encode("ascii"))
    digest.update(b"E")
    digest.update(net.edge_array().astype("<i8").tobytes())
    digest.update(b"U")
    digest.update(net.unknown_array().astype("<i8").tobytes())
    return digest.hexdigest()
