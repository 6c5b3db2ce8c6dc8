"""Maximum likelihood network embedding restricted to the observed pairs.

The link function is ``P_ij = sigmoid(beta - gamma / 2 * ||x_i - x_j||^2)``.
Pairs in U contribute nothing to the likelihood, its gradient or the fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit, log_expit, logit

from src.core.exceptions import ContractViolation, NumericalError
from src.core.network import pair_index, pairs_from_index
from src.models.embedding import EmbeddingModel, FitConfig, FitTrace
from src.models.network import PartialNetwork
from src.utils.logger import logger

_logger = logger.getChild("cne")

# bounds on the adaptive learning rate, relative to the configured one
_MIN_RATE_FACTOR = 1e-12
_MAX_RATE_FACTOR = 1e4
_RATE_GROWTH = 1.1


@dataclass
class ObservedPairs:
    """Observed pairs as parallel arrays; ``weights`` undo subsampling."""

    rows: np.ndarray
    cols: np.ndarray
    labels: np.ndarray
    weights: np.ndarray
    subsampled: bool = False

    def __len__(self) -> int:
        return len(self.rows)


def observed_pairs(net: PartialNetwork) -> ObservedPairs:
    """Every pair of E ∪ D exactly once, unit weights."""
    keys = np.arange(net.n_pairs, dtype=np.int64)
    unknown_keys = pair_index(net.unknown_array(), net.n)
    if len(unknown_keys):
        keys = keys[~np.isin(keys, unknown_keys, assume_unique=True)]
    pairs = pairs_from_index(keys, net.n)
    edge_keys = pair_index(net.edge_array(), net.n)
    labels = np.isin(keys, edge_keys, assume_unique=True).astype(np.float64)
    return ObservedPairs(
        rows=pairs[:, 0],
        cols=pairs[:, 1],
        labels=labels,
        weights=np.ones(len(keys), dtype=np.float64),
    )


def sampled_pairs(
    net: PartialNetwork, negatives_per_node: int, rng: np.random.Generator
) -> ObservedPairs:
    """All of E plus per-node uniform draws of disconnected partners.

    Each draw stands for ``(n - 1) / (2 k)`` pairs, so weighted sums over the
    sample are unbiased for sums over D.
    """
    n = net.n
    edges = net.edge_array()
    draws = rng.integers(0, n - 1, size=(n, negatives_per_node))
    owners = np.repeat(np.arange(n, dtype=np.int64), negatives_per_node)
    partners = draws.ravel()
    partners = partners + (partners >= owners)
    sampled = np.sort(np.stack([owners, partners], axis=1), axis=1)
    keys = pair_index(sampled, n)
    blocked = np.concatenate(
        [pair_index(edges, n), pair_index(net.unknown_array(), n)]
    )
    sampled = sampled[~np.isin(keys, blocked)]
    weight = (n - 1) / (2.0 * negatives_per_node)
    return ObservedPairs(
        rows=np.concatenate([edges[:, 0], sampled[:, 0]]),
        cols=np.concatenate([edges[:, 1], sampled[:, 1]]),
        labels=np.concatenate([np.ones(len(edges)), np.zeros(len(sampled))]),
        weights=np.concatenate([np.ones(len(edges)), np.full(len(sampled), weight)]),
        subsampled=True,
    )


def _logits(X: np.ndarray, beta: float, gamma: float, pairs: ObservedPairs) -> Tuple[np.ndarray, np.ndarray]:
    diff = X[pairs.rows] - X[pairs.cols]
    sq = np.einsum("ij,ij->i", diff, diff)
    return diff, beta - 0.5 * gamma * sq


def _objective(X: np.ndarray, beta: float, gamma: float, pairs: ObservedPairs) -> float:
    if len(pairs) == 0:
        return 0.0
    _, z = _logits(X, beta, gamma, pairs)
    terms = pairs.labels * log_expit(z) + (1.0 - pairs.labels) * log_expit(-z)
    return float(np.dot(pairs.weights, terms))


def _gradient(
    X: np.ndarray, beta: float, gamma: float, pairs: ObservedPairs
) -> Tuple[np.ndarray, float]:
    n, d = X.shape
    grad = np.zeros((n, d), dtype=np.float64)
    if len(pairs) == 0:
        return grad, 0.0
    diff, z = _logits(X, beta, gamma, pairs)
    residual = pairs.weights * (pairs.labels - expit(z))
    # d/dx_i of the pair term is gamma * r * (x_j - x_i)
    scaled = gamma * residual[:, None] * diff
    for k in range(d):
        grad[:, k] = np.bincount(pairs.cols, weights=scaled[:, k], minlength=n) - np.bincount(
            pairs.rows, weights=scaled[:, k], minlength=n
        )
    return grad, float(residual.sum())


def link_probability(model: EmbeddingModel, i: int, j: int) -> float:
    """P(a_ij = 1 | X) for a pair of distinct nodes."""
    i, j = int(i), int(j)
    if i == j:
        raise ContractViolation(f"link probability undefined for self-pair ({i}, {i})")
    if not (0 <= i < model.n and 0 <= j < model.n):
        raise ContractViolation(f"pair ({i}, {j}) outside node range 0..{model.n - 1}")
    diff = model.X[i] - model.X[j]
    return float(expit(model.beta - 0.5 * model.gamma * float(diff @ diff)))


def pair_probabilities(model: EmbeddingModel, pairs: np.ndarray) -> np.ndarray:
    """Vectorised link probabilities for an ``(m, 2)`` pair array."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    diff = model.X[pairs[:, 0]] - model.X[pairs[:, 1]]
    sq = np.einsum("ij,ij->i", diff, diff)
    return expit(model.beta - 0.5 * model.gamma * sq)


def probability_matrix(model: EmbeddingModel) -> np.ndarray:
    """Dense symmetric matrix of link probabilities; the diagonal is zero."""
    X = model.X
    norms = np.einsum("ij,ij->i", X, X)
    sq = np.maximum(norms[:, None] + norms[None, :] - 2.0 * X @ X.T, 0.0)
    P = expit(model.beta - 0.5 * model.gamma * sq)
    P = 0.5 * (P + P.T)
    np.fill_diagonal(P, 0.0)
    return P


def log_likelihood(model: EmbeddingModel, net: PartialNetwork) -> float:
    """Exact log-likelihood of the observed part of ``net``."""
    _check_shapes(model, net)
    return _objective(model.X, model.beta, model.gamma, observed_pairs(net))


def gradient(model: EmbeddingModel, net: PartialNetwork) -> Tuple[np.ndarray, float]:
    """Gradient of :func:`log_likelihood` with respect to (X, beta)."""
    _check_shapes(model, net)
    return _gradient(model.X, model.beta, model.gamma, observed_pairs(net))


def initial_beta(net: PartialNetwork) -> float:
    """logit of the observed link density."""
    observed = len(net.edges) + net.n_disconnected
    if observed == 0:
        return 0.0
    density = np.clip(len(net.edges) / observed, 1e-6, 1.0 - 1e-6)
    return float(logit(density))


def fit(
    net: PartialNetwork,
    fit_config: FitConfig,
    gamma: float = 1.0,
    warm_start: Optional[EmbeddingModel] = None,
) -> EmbeddingModel:
    """Full-batch gradient ascent on the observed-pair likelihood.

    The first step uses ``learning_rate``; later steps start from the
    Barzilai-Borwein estimate of the local inverse curvature and are halved
    until the likelihood does not decrease. Stops when an unhalved step
    moves the parameters by less than ``tolerance`` on average, or after
    ``max_epochs``.
    """
    if net.n < 2:
        raise ContractViolation("fit needs at least two nodes")
    if gamma <= 0:
        raise ContractViolation(f"gamma must be positive, got {gamma}")

    rng = np.random.default_rng(fit_config.seed)
    subsample = fit_config.subsample and net.n > fit_config.exact_pair_limit
    pairs = (
        sampled_pairs(net, fit_config.negatives_per_node, rng)
        if subsample
        else observed_pairs(net)
    )

    if fit_config.init == "warm_start" and warm_start is not None:
        if warm_start.X.shape != (net.n, fit_config.dim):
            raise ContractViolation(
                f"warm start shape {warm_start.X.shape} does not match ({net.n}, {fit_config.dim})"
            )
        X = np.array(warm_start.X, dtype=np.float64)
        beta = warm_start.beta
    else:
        X = rng.normal(0.0, fit_config.scale, size=(net.n, fit_config.dim))
        beta = initial_beta(net)

    current = _objective(X, beta, gamma, pairs)
    if not np.isfinite(current):
        raise NumericalError(f"non-finite initial log-likelihood {current}")

    rate = fit_config.learning_rate
    min_rate = fit_config.learning_rate * _MIN_RATE_FACTOR
    max_rate = fit_config.learning_rate * _MAX_RATE_FACTOR
    params = np.append(X.ravel(), beta)
    previous: Optional[Tuple[np.ndarray, np.ndarray]] = None
    history = [current]
    converged = False
    epoch = 0
    for epoch in range(1, fit_config.max_epochs + 1):
        grad_X, grad_beta = _gradient(X, beta, gamma, pairs)
        if not (np.all(np.isfinite(grad_X)) and np.isfinite(grad_beta)):
            raise NumericalError(f"non-finite gradient at epoch {epoch}")
        grad = np.append(grad_X.ravel(), grad_beta)
        if previous is not None:
            rate = _spectral_rate(params - previous[0], grad - previous[1], rate, min_rate, max_rate)

        halved = False
        while True:
            X_next = X + rate * grad_X
            beta_next = beta + rate * grad_beta
            candidate = _objective(X_next, beta_next, gamma, pairs)
            if np.isfinite(candidate) and candidate >= current:
                break
            rate *= 0.5
            halved = True
            if rate < min_rate:
                break
        if rate < min_rate:
            # no ascent direction left at machine precision
            converged = True
            break

        update = np.mean(np.abs(np.append((X_next - X).ravel(), beta_next - beta)))
        previous = (params, grad)
        X, beta, current = X_next, beta_next, candidate
        params = np.append(X.ravel(), beta)
        history.append(current)
        if update < fit_config.tolerance and not halved:
            converged = True
            break

    if not np.isfinite(current) or not np.all(np.isfinite(X)):
        raise NumericalError("optimisation diverged to non-finite values")

    _logger.debug(
        "Fit finished | n=%s | d=%s | epochs=%s | loglik=%.6f | converged=%s | subsampled=%s",
        net.n,
        fit_config.dim,
        epoch,
        current,
        converged,
        subsample,
    )
    trace = FitTrace(
        epochs=epoch,
        log_likelihoods=history,
        converged=converged,
        learning_rate=rate,
        subsampled=subsample,
    )
    return EmbeddingModel(X=X, gamma=gamma, beta=beta, trace=trace)


def _spectral_rate(
    step: np.ndarray, change: np.ndarray, fallback: float, min_rate: float, max_rate: float
) -> float:
    """Barzilai-Borwein step length for ascent; grows ``fallback`` where curvature is not negative."""
    curvature = -float(step @ change)
    if not np.isfinite(curvature) or curvature <= 0.0:
        return min(fallback * _RATE_GROWTH, max_rate)
    return float(np.clip(float(step @ step) / curvature, min_rate, max_rate))


def _check_shapes(model: EmbeddingModel, net: PartialNetwork) -> None:
    if model.n != net.n:
        raise ContractViolation(f"model has {model.n} nodes, network has {net.n}")
