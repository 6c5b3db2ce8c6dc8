"""V-optimality utility: observed information, covariances and variance reduction.

For every node the covariance of its embedding is bounded by the ridge
inverse of its observed information. Revealing a pair {i, j} adds one
rank-one term to the information of i and of j; the utility of the pair is
the resulting drop of the summed prediction-variance bounds over U.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit

from src.core.cne import link_probability
from src.core.exceptions import ContractViolation, NumericalError
from src.core.network import pair_index
from src.models.embedding import EmbeddingModel
from src.models.network import PartialNetwork, normalize_pair
from src.models.scores import CovarianceTable, NodeCovariance, UtilityScores
from src.utils.config import worker_threads
from src.utils.logger import logger

_logger = logger.getChild("voptimality")

DEFAULT_RIDGE = 1e-4


def _differences(model: EmbeddingModel, i: int, partners: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Rows ``x_i - x_k`` and weights ``P_ik (1 - P_ik)`` for the given partners."""
    diff = model.X[i] - model.X[partners]
    sq = np.einsum("ij,ij->i", diff, diff)
    P = expit(model.beta - 0.5 * model.gamma * sq)
    return diff, P * (1.0 - P)


def _observed_partners(net: PartialNetwork, i: int) -> np.ndarray:
    hidden = net.unknown_partners(i)
    return np.array(
        [j for j in range(net.n) if j != i and j not in hidden], dtype=np.int64
    )


def fisher_information(model: EmbeddingModel, net: PartialNetwork, i: int) -> np.ndarray:
    """Observed information of x_i over every pair {i, j} outside U."""
    i = net.check_node(i)
    partners = _observed_partners(net, i)
    if len(partners) == 0:
        return np.zeros((model.d, model.d))
    diff, weights = _differences(model, i, partners)
    info = model.gamma ** 2 * (diff * weights[:, None]).T @ diff
    return 0.5 * (info + info.T)


def node_covariance(info: np.ndarray, ridge: float = DEFAULT_RIDGE, node: int = -1) -> NodeCovariance:
    """Invert ``info + ridge * I`` through its Cholesky factor."""
    info = np.asarray(info, dtype=np.float64)
    d = info.shape[0]
    system = info + ridge * np.eye(d)
    try:
        factor = cho_factor(system, lower=True)
        cov = cho_solve(factor, np.eye(d))
    except LinAlgError as exc:
        raise NumericalError(
            f"covariance of node {node} is not invertible with ridge={ridge}"
        ) from exc
    if not np.all(np.isfinite(cov)):
        raise NumericalError(f"covariance of node {node} has non-finite entries")
    return NodeCovariance(node=node, info=info, cov=0.5 * (cov + cov.T), ridge=ridge)


def covariance_table(
    model: EmbeddingModel, net: PartialNetwork, ridge: float = DEFAULT_RIDGE
) -> CovarianceTable:
    """Covariances of every node for the current model snapshot."""
    if model.n != net.n:
        raise ContractViolation(f"model has {model.n} nodes, network has {net.n}")
    infos = np.empty((net.n, model.d, model.d))
    covs = np.empty_like(infos)
    for i in range(net.n):
        infos[i] = fisher_information(model, net, i)
        covs[i] = node_covariance(infos[i], ridge, node=i).cov
    return CovarianceTable(
        snapshot_id=model.snapshot_id, infos=infos, covariances=covs, ridge=ridge
    )


def _as_matrix(cov: Union[NodeCovariance, np.ndarray]) -> np.ndarray:
    return cov.cov if isinstance(cov, NodeCovariance) else np.asarray(cov, dtype=np.float64)


def updated_covariance(
    cov_i: Union[NodeCovariance, np.ndarray], model: EmbeddingModel, i: int, j: int
) -> np.ndarray:
    """Covariance of x_i once {i, j} is observed, by a rank-one update."""
    C = _as_matrix(cov_i)
    P = link_probability(model, i, j)
    c = model.gamma ** 2 * P * (1.0 - P)
    v = model.X[i] - model.X[j]
    Cv = C @ v
    updated = C - c * np.outer(Cv, Cv) / (1.0 + c * float(v @ Cv))
    return 0.5 * (updated + updated.T)


def variance_bound(cov_i: Union[NodeCovariance, np.ndarray], model: EmbeddingModel, i: int, j: int) -> float:
    """Contribution of endpoint i to the variance bound of P_ij."""
    C = _as_matrix(cov_i)
    P = link_probability(model, i, j)
    v = model.X[i] - model.X[j]
    return float((model.gamma * P * (1.0 - P)) ** 2 * (v @ C @ v))


def total_variance_bound(
    model: EmbeddingModel,
    net: PartialNetwork,
    covariances: Union[CovarianceTable, np.ndarray],
) -> float:
    """Sum over U of both endpoint contributions to the variance bounds."""
    covs = covariances.covariances if isinstance(covariances, CovarianceTable) else covariances
    total = 0.0
    for i, j in net.unknown_array():
        total += variance_bound(covs[i], model, i, j) + variance_bound(covs[j], model, j, i)
    return total


def _check_snapshot(model: EmbeddingModel, covariances: CovarianceTable) -> None:
    if covariances.snapshot_id != model.snapshot_id:
        raise ContractViolation(
            f"covariances belong to snapshot {covariances.snapshot_id}, model is {model.snapshot_id}"
        )


def _endpoint_utility(
    model: EmbeddingModel,
    net: PartialNetwork,
    cov: np.ndarray,
    a: int,
    b: int,
    exclude_self_pair: bool,
) -> float:
    partners = np.array(sorted(net.unknown_partners(a)), dtype=np.int64)
    if exclude_self_pair:
        partners = partners[partners != b]
    if len(partners) == 0:
        return 0.0
    gamma = model.gamma
    v_b, w_b = _differences(model, a, np.array([b]))
    v_b, w_b = v_b[0], float(w_b[0])
    Cv = cov @ v_b
    d_bb = float(v_b @ Cv)
    V, w = _differences(model, a, partners)
    d_kb = V @ Cv
    scale = gamma ** 4 * w_b / (1.0 + gamma ** 2 * w_b * d_bb)
    return float(scale * np.sum(w ** 2 * d_kb ** 2))


def vopt_utility(
    model: EmbeddingModel,
    net: PartialNetwork,
    covariances: CovarianceTable,
    i: int,
    j: int,
    exclude_self_pair: bool = False,
) -> float:
    """Variance reduction over U from revealing {i, j}, closed form."""
    _check_snapshot(model, covariances)
    i, j = normalize_pair(i, j)
    if (i, j) not in net.unknown:
        raise ContractViolation(f"pair ({i}, {j}) is not a candidate in U")
    return _endpoint_utility(
        model, net, covariances.covariances[i], i, j, exclude_self_pair
    ) + _endpoint_utility(model, net, covariances.covariances[j], j, i, exclude_self_pair)


def variance_reduction(
    model: EmbeddingModel,
    net: PartialNetwork,
    covariances: CovarianceTable,
    i: int,
    j: int,
    exclude_self_pair: bool = False,
) -> float:
    """Same quantity as :func:`vopt_utility` from explicit updated covariances."""
    _check_snapshot(model, covariances)
    i, j = normalize_pair(i, j)
    if (i, j) not in net.unknown:
        raise ContractViolation(f"pair ({i}, {j}) is not a candidate in U")
    total = 0.0
    for a, b in ((i, j), (j, i)):
        C = covariances.covariances[a]
        drop = C - updated_covariance(C, model, a, b)
        for k in sorted(net.unknown_partners(a)):
            if exclude_self_pair and k == b:
                continue
            P = link_probability(model, a, k)
            v = model.X[a] - model.X[k]
            total += (model.gamma * P * (1.0 - P)) ** 2 * float(v @ drop @ v)
    return total


def _node_terms(
    model: EmbeddingModel,
    net: PartialNetwork,
    covs: np.ndarray,
    a: int,
    exclude_self_pair: bool,
) -> Tuple[int, np.ndarray, np.ndarray]:
    """Endpoint-a utilities for every unknown partner b of a at once."""
    partners = np.array(sorted(net.unknown_partners(a)), dtype=np.int64)
    if len(partners) == 0:
        return a, partners, np.empty(0)
    gamma = model.gamma
    V, w = _differences(model, a, partners)
    D = (V @ covs[a]) @ V.T
    d_bb = np.diag(D)
    totals = (w ** 2) @ (D ** 2)
    if exclude_self_pair:
        totals = totals - w ** 2 * d_bb ** 2
    terms = gamma ** 4 * w / (1.0 + gamma ** 2 * w * d_bb) * totals
    return a, partners, terms


def score_all_vopt(
    model: EmbeddingModel,
    net: PartialNetwork,
    ridge: float = DEFAULT_RIDGE,
    exclude_self_pair: bool = False,
    iteration: int = 0,
    threads: Optional[int] = None,
) -> UtilityScores:
    """V-optimality utility of every pair in U.

    Covariances are built once per node; each node then contributes its
    endpoint terms for all of its unknown partners in one Gram product.
    """
    covariances = covariance_table(model, net, ridge)
    unknown = net.unknown_array()
    scores = np.zeros(len(unknown))
    keys = pair_index(unknown, net.n)
    nodes: List[int] = [a for a in range(net.n) if net.unknown_partners(a)]
    workers = max(1, threads if threads is not None else worker_threads())

    def compute(a: int) -> Tuple[int, np.ndarray, np.ndarray]:
        return _node_terms(model, net, covariances.covariances, a, exclude_self_pair)

    if workers == 1 or len(nodes) < 2:
        results: Iterable = map(compute, nodes)
        _accumulate(results, net.n, keys, scores)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            # map keeps node order, so the reduction order is fixed
            _accumulate(executor.map(compute, nodes), net.n, keys, scores)

    u_degrees = net.unknown_degrees()
    d = model.d
    metadata = {
        "ridge": ridge,
        "exclude_self_pair": exclude_self_pair,
        "complexity": "O(n*n*d^2 + sum_U(deg_U(i)+deg_U(j))*d^2)",
        "covariance_cost": net.n * net.n * d * d,
        "candidate_cost": int(np.sum(u_degrees.astype(np.int64) ** 2)) * d * d,
    }
    return UtilityScores(
        strategy="v-opt",
        pairs=unknown,
        scores=scores,
        iteration=iteration,
        snapshot_id=model.snapshot_id,
        metadata=metadata,
    )


def _accumulate(results: Iterable, n: int, keys: np.ndarray, scores: np.ndarray) -> None:
    for a, partners, terms in results:
        if len(partners) == 0:
            continue
        candidates = np.stack([np.minimum(partners, a), np.maximum(partners, a)], axis=1)
        positions = np.searchsorted(keys, pair_index(candidates, n))
        np.add.at(scores, positions, terms)
