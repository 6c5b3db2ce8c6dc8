"""Synthetic benchmark graphs for tests and desk-scale experiments."""

from __future__ import annotations

from typing import List, Sequence, Set

import numpy as np
from scipy.special import expit

from src.models.network import Pair, PartialNetwork, normalize_pair


def cycle_graph(n: int) -> PartialNetwork:
    return PartialNetwork(n=n, edges={normalize_pair(i, (i + 1) % n) for i in range(n)})


def path_graph(n: int) -> PartialNetwork:
    return PartialNetwork(n=n, edges={(i, i + 1) for i in range(n - 1)})


def star_graph(leaves: int) -> PartialNetwork:
    """Center 0 linked to nodes 1..leaves."""
    return PartialNetwork(n=leaves + 1, edges={(0, k) for k in range(1, leaves + 1)})


def stochastic_block_graph(
    sizes: Sequence[int], p_in: float, p_out: float, seed: int = 0
) -> PartialNetwork:
    """Undirected stochastic block model; blocks are consecutive index ranges."""
    n = int(sum(sizes))
    blocks = np.repeat(np.arange(len(sizes)), sizes)
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    same = blocks[rows] == blocks[cols]
    linked = rng.random(len(rows)) < np.where(same, p_in, p_out)
    edges = {(int(i), int(j)) for i, j in zip(rows[linked], cols[linked])}
    return PartialNetwork(n=n, edges=edges)


def latent_space_graph(
    sizes: Sequence[int],
    separation: float = 1.5,
    spread: float = 0.7,
    beta: float = -0.9,
    gamma: float = 1.0,
    seed: int = 0,
) -> PartialNetwork:
    """Random graph drawn from the embedding's own link function.

    Groups of ``sizes`` nodes are scattered around centers placed
    ``separation`` apart on a line in the plane; every pair links with
    probability ``sigmoid(beta - gamma / 2 * ||z_i - z_j||^2)``. Three groups
    of 43, 13 and 49 nodes give roughly Polbooks' size and link density, with
    the neutral group in the middle.
    """
    n = int(sum(sizes))
    groups = np.repeat(np.arange(len(sizes)), sizes)
    rng = np.random.default_rng(seed)
    centers = (np.arange(len(sizes)) - (len(sizes) - 1) / 2.0) * separation
    Z = rng.normal(0.0, spread, size=(n, 2))
    Z[:, 0] += centers[groups]
    rows, cols = np.triu_indices(n, k=1)
    diff = Z[rows] - Z[cols]
    P = expit(beta - 0.5 * gamma * np.einsum("ij,ij->i", diff, diff))
    linked = rng.random(len(rows)) < P
    edges = {(int(i), int(j)) for i, j in zip(rows[linked], cols[linked])}
    return PartialNetwork(n=n, edges=edges)


def two_hub_graph(leaves: int = 10, new_node_links: int = 3) -> PartialNetwork:
    """Two linked hubs with their own leaves, an outer ring and a new node.

    Layout: hub A = 0, hub B = 1, A's leaves 2..leaves+1, B's leaves
    leaves+2..2*leaves+1. Consecutive leaves of a hub are chained so the
    communities are not stars, and every leaf has one pendant node that is
    not adjacent to a hub. The last node is the new node, linked to hub A
    and to the first ``new_node_links`` leaves of A.
    """
    hub_a, hub_b = 0, 1
    leaves_a = list(range(2, 2 + leaves))
    leaves_b = list(range(2 + leaves, 2 + 2 * leaves))
    first_pendant = 2 + 2 * leaves
    pendants = list(range(first_pendant, first_pendant + 2 * leaves))
    new_node = first_pendant + 2 * leaves

    edges: Set[Pair] = {(hub_a, hub_b)}
    for hub, group in ((hub_a, leaves_a), (hub_b, leaves_b)):
        edges.update(normalize_pair(hub, leaf) for leaf in group)
        edges.update(normalize_pair(a, b) for a, b in zip(group, group[1:]))
    for leaf, pendant in zip(leaves_a + leaves_b, pendants):
        edges.add(normalize_pair(leaf, pendant))
    edges.add(normalize_pair(new_node, hub_a))
    edges.update(normalize_pair(new_node, leaf) for leaf in leaves_a[:new_node_links])
    return PartialNetwork(n=new_node + 1, edges=edges)


def hub_adjacent(net: PartialNetwork, hubs: Sequence[int] = (0, 1)) -> List[int]:
    """Hubs plus every node linked to a hub."""
    nodes = set(hubs)
    for hub in hubs:
        nodes.update(net.edge_partners(hub))
    return sorted(nodes)
