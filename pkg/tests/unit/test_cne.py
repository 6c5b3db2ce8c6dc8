"""Tests for the observed-pair network embedding."""

import itertools

import numpy as np
import pytest
from scipy.special import logit

from src.core.cne import (
    fit,
    gradient,
    initial_beta,
    link_probability,
    log_likelihood,
    observed_pairs,
    pair_probabilities,
    probability_matrix,
    sampled_pairs,
)
from src.core.exceptions import ContractViolation
from src.core.network import adjacency, mask_pairs, observed_mask
from src.models.embedding import EmbeddingModel, FitConfig
from src.models.network import PartialNetwork


def _random_model(n, d=2, seed=0, gamma=1.0, beta=-0.5):
    X = np.random.default_rng(seed).normal(size=(n, d))
    return EmbeddingModel(X=X, gamma=gamma, beta=beta)


def _gradient_norm(model, net):
    grad_X, grad_beta = gradient(model, net)
    return np.linalg.norm(np.append(grad_X.ravel(), grad_beta))


def _random_partial_network(n, seed):
    """Random E and U over n nodes; the pair (0, 1) always stays observed."""
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    edges = {pair for pair in pairs if rng.random() < 0.4}
    unknown = {pair for pair in pairs[1:] if rng.random() < 0.3} - edges
    return PartialNetwork(n=n, edges=edges, unknown=unknown)


def _numeric_gradient(model, net, eps=1e-6):
    def shifted(dX=0.0, dbeta=0.0):
        return log_likelihood(EmbeddingModel(model.X + dX, model.gamma, model.beta + dbeta), net)

    grad_X = np.zeros_like(model.X)
    for i in range(model.n):
        for k in range(model.d):
            step = np.zeros_like(model.X)
            step[i, k] = eps
            grad_X[i, k] = (shifted(dX=step) - shifted(dX=-step)) / (2 * eps)
    grad_beta = (shifted(dbeta=eps) - shifted(dbeta=-eps)) / (2 * eps)
    return grad_X, grad_beta


class TestLikelihood:
    """Test the likelihood and its gradient."""

    def test_likelihood_sums_observed_pairs_only(self, masked):
        """Pairs in U do not contribute."""
        net0, _ = masked
        model = _random_model(net0.n, gamma=1.5)
        P = probability_matrix(model)
        A = adjacency(net0)
        upper = np.triu(observed_mask(net0), k=1)
        expected = np.sum((A * np.log(P) + (1 - A) * np.log(1 - P))[upper])
        assert log_likelihood(model, net0) == pytest.approx(expected, rel=1e-10)

    def test_observed_pairs_cover_e_and_d(self, masked):
        net0, _ = masked
        pairs = observed_pairs(net0)
        assert len(pairs) == net0.n_pairs - len(net0.unknown)
        assert pairs.labels.sum() == len(net0.edges)

    def test_gradient_matches_finite_differences(self, masked):
        net0, _ = masked
        model = _random_model(net0.n, d=3, seed=2, gamma=0.7)
        grad_X, grad_beta = gradient(model, net0)

        eps = 1e-6
        numeric = np.zeros_like(grad_X)
        for i in range(model.n):
            for k in range(model.d):
                X_plus = model.X.copy()
                X_plus[i, k] += eps
                X_minus = model.X.copy()
                X_minus[i, k] -= eps
                numeric[i, k] = (
                    log_likelihood(EmbeddingModel(X_plus, model.gamma, model.beta), net0)
                    - log_likelihood(EmbeddingModel(X_minus, model.gamma, model.beta), net0)
                ) / (2 * eps)
        error = np.linalg.norm(grad_X - numeric) / np.linalg.norm(numeric)
        assert error < 1e-5

        beta_plus = log_likelihood(EmbeddingModel(model.X, model.gamma, model.beta + eps), net0)
        beta_minus = log_likelihood(EmbeddingModel(model.X, model.gamma, model.beta - eps), net0)
        assert grad_beta == pytest.approx((beta_plus - beta_minus) / (2 * eps), rel=1e-5)

    @pytest.mark.parametrize("seed", range(20))
    def test_gradient_matches_finite_differences_on_small_graphs(self, seed):
        n, d = 3 + seed % 6, 1 + seed % 3
        net = _random_partial_network(n, seed)
        model = _random_model(n, d=d, seed=seed, gamma=0.5 + 0.1 * seed, beta=-1.0 + 0.1 * seed)
        analytic = np.append(*(np.ravel(part) for part in gradient(model, net)))
        numeric = np.append(*(np.ravel(part) for part in _numeric_gradient(model, net)))
        assert np.linalg.norm(analytic - numeric) / np.linalg.norm(numeric) < 1e-5

    def test_likelihood_ignores_status_of_unknown_pairs(self, truth):
        """Two truths that differ only inside U give the same likelihood."""
        hidden = sorted(truth.edges)[:4] + [(0, 15), (1, 14)]
        flipped = PartialNetwork(n=truth.n, edges=truth.edges ^ {truth.canonical(p) for p in hidden})
        net_a, _ = mask_pairs(truth, hidden)
        net_b, _ = mask_pairs(flipped, hidden)
        model = _random_model(truth.n, d=3, seed=5)
        assert log_likelihood(model, net_a) == log_likelihood(model, net_b)
        np.testing.assert_array_equal(gradient(model, net_a)[0], gradient(model, net_b)[0])

    def test_initial_beta_is_density_logit(self, masked):
        net0, _ = masked
        observed = len(net0.edges) + net0.n_disconnected
        assert initial_beta(net0) == pytest.approx(logit(len(net0.edges) / observed))


class TestProbabilities:
    """Test link probability helpers."""

    def test_probability_decreases_with_distance(self):
        model = EmbeddingModel(X=np.array([[0.0], [1.0], [3.0]]), gamma=1.0, beta=0.0)
        assert link_probability(model, 0, 1) > link_probability(model, 0, 2)
        assert link_probability(model, 0, 1) == link_probability(model, 1, 0)

    def test_probability_at_zero_bias_and_distance_two(self):
        model = EmbeddingModel(X=np.array([[0.0, 0.0], [2.0, 0.0]]), gamma=1.0, beta=0.0)
        assert link_probability(model, 0, 1) == pytest.approx(0.1192, abs=1e-4)

    def test_self_pair_undefined(self):
        model = _random_model(3)
        with pytest.raises(ContractViolation):
            link_probability(model, 1, 1)

    def test_vectorised_forms_agree(self):
        model = _random_model(5, d=3)
        pairs = np.array([[0, 1], [1, 4], [2, 3]])
        P = probability_matrix(model)
        np.testing.assert_allclose(pair_probabilities(model, pairs), P[pairs[:, 0], pairs[:, 1]])
        np.testing.assert_allclose(P, P.T)
        assert np.all(np.diag(P) == 0.0)

    def test_model_is_read_only(self):
        model = _random_model(3)
        with pytest.raises(ValueError):
            model.X[0, 0] = 1.0


class TestFit:
    """Test gradient-ascent fitting."""

    def test_likelihood_never_decreases(self, masked, fit_config):
        net0, _ = masked
        model = fit(net0, fit_config)
        history = model.trace.log_likelihoods
        assert all(b >= a for a, b in zip(history, history[1:]))
        assert history[-1] > history[0]
        assert log_likelihood(model, net0) == pytest.approx(history[-1])

    def test_fit_is_deterministic(self, masked, fit_config):
        net0, _ = masked
        first = fit(net0, fit_config)
        second = fit(net0, fit_config)
        np.testing.assert_array_equal(first.X, second.X)
        assert first.beta == second.beta
        assert first.snapshot_id == second.snapshot_id

    def test_seed_changes_initialisation(self, masked, fit_config):
        net0, _ = masked
        first = fit(net0, fit_config)
        second = fit(net0, fit_config.model_copy(update={"seed": 1}))
        assert not np.array_equal(first.X, second.X)

    def test_fit_approaches_stationary_point(self, masked):
        net0, _ = masked
        cfg = FitConfig(dim=2, max_epochs=1000, seed=0)
        start = EmbeddingModel(
            X=np.random.default_rng(cfg.seed).normal(0.0, cfg.scale, size=(net0.n, cfg.dim)),
            gamma=1.0,
            beta=initial_beta(net0),
        )
        model = fit(net0, cfg)
        assert _gradient_norm(model, net0) < 1e-2 * _gradient_norm(start, net0)

    def test_warm_start_continues_from_model(self, masked, fit_config):
        net0, _ = masked
        start = fit(net0, fit_config)
        warm_cfg = fit_config.model_copy(update={"init": "warm_start", "max_epochs": 1})
        model = fit(net0, warm_cfg, warm_start=start)
        assert log_likelihood(model, net0) >= log_likelihood(start, net0)

    def test_warm_start_shape_mismatch(self, masked, fit_config):
        net0, _ = masked
        warm = _random_model(net0.n, d=fit_config.dim + 1)
        with pytest.raises(ContractViolation):
            fit(net0, fit_config.model_copy(update={"init": "warm_start"}), warm_start=warm)

    def test_invalid_gamma(self, masked, fit_config):
        net0, _ = masked
        with pytest.raises(ContractViolation):
            fit(net0, fit_config, gamma=0.0)

    def test_subsampling_on_large_graphs(self, masked, fit_config):
        net0, _ = masked
        cfg = fit_config.model_copy(update={"exact_pair_limit": 2, "negatives_per_node": 3, "max_epochs": 5})
        model = fit(net0, cfg)
        assert model.trace.subsampled

    def test_sampled_pairs_weights(self, masked, rng):
        net0, _ = masked
        pairs = sampled_pairs(net0, 4, rng)
        assert pairs.subsampled
        assert pairs.labels.sum() == len(net0.edges)
        negatives = pairs.weights[pairs.labels == 0]
        np.testing.assert_allclose(negatives, (net0.n - 1) / 8.0)
        sampled = set(zip(pairs.rows[pairs.labels == 0].tolist(), pairs.cols[pairs.labels == 0].tolist()))
        assert not sampled & net0.unknown
        assert not sampled & net0.edges


class TestFitConfig:
    """Test FitConfig defaults."""

    def test_from_config_reads_embedding_section(self):
        cfg = FitConfig.from_config(seed=5)
        assert cfg.dim == 8
        assert cfg.seed == 5
        assert cfg.scale == pytest.approx(1 / np.sqrt(8))

    def test_rejects_invalid_values(self):
        with pytest.raises(ValueError):
            FitConfig(dim=0)
