"""Integration tests for the new-node study."""

import pytest

from src.core.exceptions import ProtocolError
from src.core.generators import hub_adjacent, two_hub_graph
from src.services.study_service import new_node_study


@pytest.fixture
def hub_graph():
    return two_hub_graph()


class TestNewNodeStudy:
    """Test rankings of a new node's candidate partners."""

    def test_one_query_per_iteration(self, hub_graph):
        node = hub_graph.n - 1
        study = new_node_study(hub_graph, node, 0, strategy="max-prob", iters=3, fit_overrides={"dim": 2, "max_epochs": 50})
        assert len(study.rankings) == 3
        assert study.state.queries_used == 3
        assert all(record.i == node or record.j == node for record in study.state.query_log)
        first = study.rankings[0]
        assert len(first) == hub_graph.n - 2
        assert list(first["rank"]) == list(range(1, len(first) + 1))
        assert 0 not in set(first["partner"])

    def test_max_deg_ranks_by_observed_degree(self, hub_graph):
        node = hub_graph.n - 1
        study = new_node_study(hub_graph, node, 0, strategy="max-deg", iters=1, fit_overrides={"dim": 2, "max_epochs": 20})
        ranking = study.rankings[0]
        degrees = list(ranking["observed_degree"])
        assert degrees == sorted(degrees, reverse=True)
        assert study.top()["partner"].iloc[0] == 1

    def test_top_candidates_are_hub_adjacent(self, hub_graph):
        node = hub_graph.n - 1
        study = new_node_study(hub_graph, node, 0, strategy="page-rank", iters=2, fit_overrides={"dim": 2, "max_epochs": 20})
        assert set(study.top()["partner"]) <= set(hub_adjacent(hub_graph))

    def test_anchor_must_be_linked(self, hub_graph):
        node = hub_graph.n - 1
        with pytest.raises(ProtocolError):
            new_node_study(hub_graph, node, 1, iters=1)
