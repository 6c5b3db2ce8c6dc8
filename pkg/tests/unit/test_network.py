"""Tests for partially observed networks, masking and the oracle."""

import numpy as np
import pytest

from src.core.exceptions import ContractViolation, DataError, GraphParseError
from src.core.generators import (
    cycle_graph,
    latent_space_graph,
    path_graph,
    stochastic_block_graph,
    two_hub_graph,
)
from src.core.network import (
    Oracle,
    adjacency,
    apply_mask,
    graph_hash,
    load_edge_list,
    mask_pairs,
    observed_mask,
    observed_neighbors,
    pair_index,
    pairs_from_index,
    reveal,
)
from src.models.network import MaskSpec, PairStatus, PartialNetwork, normalize_pair


class TestPartialNetwork:
    """Test the PartialNetwork model."""

    def test_pairs_are_canonical(self):
        """Pairs are stored as (min, max)."""
        net = PartialNetwork(n=4, edges={(2, 1)}, unknown={(3, 0)})
        assert net.edges == {(1, 2)}
        assert net.unknown == {(0, 3)}

    def test_status_of_every_kind(self):
        """Pairs outside E and U are disconnected."""
        net = PartialNetwork(n=4, edges={(0, 1)}, unknown={(2, 3)})
        assert net.status(1, 0) == PairStatus.CONNECTED
        assert net.status(2, 3) == PairStatus.UNKNOWN
        assert net.status(0, 2) == PairStatus.DISCONNECTED
        assert net.n_disconnected == 6 - 2

    def test_overlap_rejected(self):
        """A pair cannot be both connected and unknown."""
        with pytest.raises(ContractViolation):
            PartialNetwork(n=3, edges={(0, 1)}, unknown={(0, 1)})

    def test_self_pair_rejected(self):
        with pytest.raises(ContractViolation):
            normalize_pair(2, 2)

    def test_out_of_range_rejected(self):
        with pytest.raises(ContractViolation):
            PartialNetwork(n=3, edges={(0, 3)})

    def test_degrees_count_observed_links_only(self):
        net = PartialNetwork(n=4, edges={(0, 1), (0, 2)}, unknown={(0, 3)})
        assert net.degree(0) == 2
        assert list(net.degrees()) == [2, 1, 1, 0]
        assert list(net.unknown_degrees()) == [1, 0, 0, 1]

    def test_reveal_moves_pair_out_of_pool(self):
        """Revealing keeps the partition and leaves the input untouched."""
        net = PartialNetwork(n=4, edges={(0, 1)}, unknown={(1, 2), (2, 3)})
        updated = reveal(net, (2, 1), PairStatus.CONNECTED)
        assert (1, 2) in updated.edges and (1, 2) not in updated.unknown
        assert (1, 2) in net.unknown
        updated = reveal(updated, (2, 3), PairStatus.DISCONNECTED)
        assert updated.unknown == set()
        assert updated.status(2, 3) == PairStatus.DISCONNECTED
        assert updated.n_pairs == len(updated.edges) + len(updated.unknown) + updated.n_disconnected

    def test_reveal_requires_unknown_pair(self):
        net = PartialNetwork(n=3, edges={(0, 1)}, unknown={(1, 2)})
        with pytest.raises(ContractViolation):
            reveal(net, (0, 2), PairStatus.CONNECTED)
        with pytest.raises(ContractViolation):
            reveal(net, (1, 2), PairStatus.UNKNOWN)

    def test_observed_neighbors(self):
        """Every pair outside U is listed with its label."""
        net = PartialNetwork(n=4, edges={(0, 1)}, unknown={(0, 2)})
        assert list(observed_neighbors(net, 0)) == [(1, 1), (3, 0)]

    def test_dense_views(self):
        net = PartialNetwork(n=3, edges={(0, 1)}, unknown={(1, 2)})
        mask = observed_mask(net)
        assert not mask[1, 2] and not mask[2, 1] and not mask[0, 0]
        assert mask[0, 2]
        A = adjacency(net)
        assert A[0, 1] == A[1, 0] == 1.0
        assert A.sum() == 2.0


class TestLoadEdgeList:
    """Test edge-list parsing."""

    def test_integer_ids_sorted_numerically(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# comment\n10 2\n2 3\n% other comment\n\n3 10\n", encoding="utf-8")
        net = load_edge_list(path)
        assert net.node_labels == ["2", "3", "10"]
        assert net.edges == {(0, 1), (1, 2), (0, 2)}
        assert net.is_fully_observed

    def test_string_ids_in_first_appearance_order(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("harry ron\nron hermione\n", encoding="utf-8")
        net = load_edge_list(path)
        assert net.node_labels == ["harry", "ron", "hermione"]
        assert net.index_of("hermione") == 2

    def test_self_loops_and_duplicates_dropped(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("0 1\n1 0\n1 1\n1 2\n", encoding="utf-8")
        net = load_edge_list(path)
        assert net.edges == {(0, 1), (1, 2)}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("0 1\n0 1 2\n", encoding="utf-8")
        with pytest.raises(GraphParseError, match=":2:"):
            load_edge_list(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_edge_list(tmp_path / "missing.txt")


class TestPairIndex:
    """Test the linear pair index."""

    def test_index_enumerates_upper_triangle(self):
        n = 7
        rows, cols = np.triu_indices(n, k=1)
        pairs = np.stack([rows, cols], axis=1)
        assert list(pair_index(pairs, n)) == list(range(n * (n - 1) // 2))
        np.testing.assert_array_equal(pairs_from_index(np.arange(len(pairs)), n), pairs)

    def test_inverse_on_large_graph(self):
        n = 5000
        keys = np.array([0, 1, n - 2, n - 1, 12_497_499 - 1, 7_000_000])
        back = pairs_from_index(keys, n)
        np.testing.assert_array_equal(pair_index(back, n), keys)
        assert np.all(back[:, 0] < back[:, 1])


class TestMasking:
    """Test mask construction and the oracle."""

    def test_uniform_mask_size_and_determinism(self):
        truth = cycle_graph(10)
        spec = MaskSpec(hide_fraction=0.2, seed=4)
        net0, oracle = apply_mask(truth, spec)
        assert len(net0.unknown) == 9  # floor(0.2 * 45 + 0.5)
        again, _ = apply_mask(truth, spec)
        assert again.unknown == net0.unknown
        assert net0.edges == truth.edges - net0.unknown
        assert oracle.ground_truth is truth

    def test_different_seeds_differ(self):
        truth = cycle_graph(12)
        first, _ = apply_mask(truth, MaskSpec(hide_fraction=0.3, seed=0))
        second, _ = apply_mask(truth, MaskSpec(hide_fraction=0.3, seed=1))
        assert first.unknown != second.unknown

    def test_new_node_mask(self):
        truth = two_hub_graph()
        node = truth.n - 1
        net0, _ = apply_mask(truth, MaskSpec(mode="new_node", node=node, anchor=0))
        assert net0.edge_partners(node) == {0}
        assert len(net0.unknown) == truth.n - 2
        assert all(node in pair for pair in net0.unknown)

    def test_new_node_needs_anchor(self):
        with pytest.raises(ValueError):
            MaskSpec(mode="new_node", node=3)

    def test_mask_needs_fully_observed_network(self):
        net = PartialNetwork(n=3, edges={(0, 1)}, unknown={(1, 2)})
        with pytest.raises(ContractViolation):
            apply_mask(net, MaskSpec())

    def test_oracle_answers_and_counts(self):
        truth = path_graph(4)
        net0, oracle = mask_pairs(truth, [(0, 1), (0, 3)])
        assert oracle.query((1, 0)) == PairStatus.CONNECTED
        assert oracle.query((0, 3)) == PairStatus.DISCONNECTED
        assert oracle.queries == 2
        np.testing.assert_array_equal(oracle.labels(net0.unknown_array()), [1, 0])
        assert oracle.queries == 2

    def test_graph_hash_tracks_content(self):
        truth = path_graph(5)
        net0, _ = mask_pairs(truth, [(1, 2)])
        assert graph_hash(truth) == graph_hash(path_graph(5))
        assert graph_hash(truth) != graph_hash(net0)
        assert graph_hash(truth) != graph_hash(cycle_graph(5))


class TestMaskProperties:
    """Properties of random masked instances."""

    @pytest.mark.parametrize("seed", range(10))
    def test_revealing_everything_restores_truth(self, seed):
        truth = stochastic_block_graph([6, 7], p_in=0.5, p_out=0.1, seed=seed)
        net0, oracle = apply_mask(truth, MaskSpec(hide_fraction=0.4, seed=seed))
        for pair in sorted(net0.unknown):
            net0 = reveal(net0, pair, oracle.query(pair))
        assert net0.edges == truth.edges
        assert not net0.unknown
        assert graph_hash(net0) == graph_hash(truth)

    @pytest.mark.parametrize("seed", range(10))
    def test_observed_neighbors_skip_unknown_pairs(self, seed):
        truth = stochastic_block_graph([5, 6], p_in=0.6, p_out=0.1, seed=seed)
        net0, _ = apply_mask(truth, MaskSpec(hide_fraction=0.3, seed=seed))
        for i in range(net0.n):
            neighbors = list(observed_neighbors(net0, i))
            assert len(neighbors) == (net0.n - 1) - len(net0.unknown_partners(i))
            assert sum(a for _, a in neighbors) == net0.degree(i)

    @pytest.mark.parametrize("seed", range(5))
    def test_pair_statuses_partition_all_pairs(self, seed):
        truth = stochastic_block_graph([7, 7], p_in=0.5, p_out=0.1, seed=seed)
        net0, _ = apply_mask(truth, MaskSpec(hide_fraction=0.25, seed=seed))
        assert not net0.edges & net0.unknown
        assert len(net0.edges) + len(net0.unknown) + net0.n_disconnected == net0.n_pairs


class TestLatentSpaceGraph:
    """Test the latent-distance benchmark generator."""

    def test_size_and_determinism(self):
        first = latent_space_graph([43, 13, 49], seed=0)
        assert first.n == 105
        assert first.edges == latent_space_graph([43, 13, 49], seed=0).edges
        assert first.edges != latent_space_graph([43, 13, 49], seed=1).edges
        assert 250 < len(first.edges) < 700

    def test_groups_are_denser_inside(self):
        net = latent_space_graph([30, 30], separation=3.0, seed=2)
        inside = sum(1 for i, j in net.edges if (i < 30) == (j < 30))
        assert inside > 0.8 * len(net.edges)
