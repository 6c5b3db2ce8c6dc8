"""Pytest configuration and fixtures"""

from pathlib import Path

import numpy as np
import pytest

from src.core.cne import fit
from src.core.generators import stochastic_block_graph
from src.core.network import apply_mask
from src.models.campaign import CampaignConfig
from src.models.embedding import FitConfig
from src.models.network import MaskSpec


@pytest.fixture
def temp_data_dir(tmp_path):
    """Temporary data directory"""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    return data_dir


@pytest.fixture
def truth():
    """Two dense blocks of eight nodes with a few cross links."""
    return stochastic_block_graph([8, 8], p_in=0.6, p_out=0.05, seed=3)


@pytest.fixture
def masked(truth):
    """(PON, oracle) with 30% of the pairs hidden."""
    return apply_mask(truth, MaskSpec(hide_fraction=0.3, seed=1))


@pytest.fixture
def fit_config():
    """Small, quick fit settings."""
    return FitConfig(dim=2, max_epochs=80, learning_rate=0.05, seed=0)


@pytest.fixture
def model(masked, fit_config):
    net0, _ = masked
    return fit(net0, fit_config, gamma=1.0)


@pytest.fixture
def campaign_config(fit_config):
    def build(strategy="v-opt", **overrides):
        values = {"strategy": strategy, "step": 3, "budget": 10, "fit": fit_config, "threads": 1}
        values.update(overrides)
        return CampaignConfig(**values)

    return build


@pytest.fixture
def edge_list_file(tmp_path, truth) -> Path:
    """The ``truth`` fixture as an edge-list file with integer ids."""
    path = tmp_path / "graph.txt"
    lines = ["# test graph"] + [f"{i} {j}" for i, j in truth.edge_array()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(0)
