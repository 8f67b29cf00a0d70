"""Fuzzy c-means engines: the classic fixed-exponent loop and the
adaptive variant whose per-(element, cluster) exponent matrix is steered
by a hedge algebra.

All update steps are plain functions over numpy arrays so they can be
tested in isolation; the two runners compose them into full clustering
loops and return a :class:`ClusterResult`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .hedges import HedgeParams, normalize_params, term_table

logger = logging.getLogger(__name__)


class InitializationError(ValueError):
    """Raised when the data cannot seed the requested number of clusters."""


@dataclass
class ClusterConfig:
    """Knobs for an adaptive-exponent run."""

    n_clusters: int
    m_min: float = 1.5
    m_max: float = 20.0
    epsilon: float = 1e-6
    max_iter: int = 300
    seed: int | None = None
    ha_params: HedgeParams = field(default_factory=HedgeParams)
    ha_update_cap: int | None = 20

    def validate(self, n_samples: int) -> None:
        if not 2 <= self.n_clusters <= n_samples:
            raise ValueError(f"n_clusters must be in [2, {n_samples}], got {self.n_clusters}")
        if not 1.0 < self.m_min <= self.m_max:
            raise ValueError("need 1 < m_min <= m_max")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        self.ha_params.validate()


@dataclass
class ExponentState:
    """Per-entry exponent matrix M with its driving quantities.

    Q holds the smoothed normalized relative distances, R the confidence
    attached to the last refresh, T the raw relative distances.  M is the
    linear image of Q on [m_min, m_max] at all times.
    """

    M: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    T: np.ndarray
    m_min: float
    m_max: float

    @classmethod
    def initial(cls, n: int, c: int, m_min: float, m_max: float) -> "ExponentState":
        return cls(
            M=np.full((n, c), float(m_min)),
            Q=np.zeros((n, c)),
            R=np.zeros((n, c)),
            T=np.zeros((n, c)),
            m_min=float(m_min),
            m_max=float(m_max),
        )


@dataclass
class ClusterResult:
    """Outcome of one clustering run."""

    centroids: np.ndarray
    membership: np.ndarray
    labels: np.ndarray
    objective_trace: list[float]
    iterations: int
    converged: bool
    final_ha_params: HedgeParams | None = None
    exponent_fuzzy_set: list[tuple[float, float]] = field(default_factory=list)
    exponents: np.ndarray | None = None
    confidences: np.ndarray | None = None
    ha_param_trace: list[HedgeParams] = field(default_factory=list)
    ha_frozen_at: int | None = None


def _as_matrix(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-d array with at least one row and column")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def pairwise_distances(data, centroids) -> np.ndarray:
    """Squared Euclidean distance from every data row to every centroid."""
    X = _as_matrix(data, "data")
    C = _as_matrix(centroids, "centroids")
    if X.shape[1] != C.shape[1]:
        raise ValueError(f"dimension mismatch: data has {X.shape[1]} columns, centroids {C.shape[1]}")
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def relative_distances(distances) -> np.ndarray:
    """Each distance divided by its row total, so rows sum to 1."""
    D = _as_matrix(distances, "distances")
    sums = D.sum(axis=1, keepdims=True)
    if np.any(sums <= 0):
        raise ValueError("a row has zero total distance; apply the zero-distance rule first")
    return D / sums


def normalize_relative(T) -> np.ndarray:
    """Affinely map the whole matrix onto [0, 1]; a flat matrix maps to 0.5."""
    T = _as_matrix(T, "relative distances")
    t_min, t_max = T.min(), T.max()
    if t_max == t_min:
        return np.full_like(T, 0.5)
    return (T - t_min) / (t_max - t_min)


def blend_exponent_state(q_prev, q_star, r) -> np.ndarray:
    """Move q_prev toward q_star by the confidence fraction r."""
    return np.clip(q_prev + r * (q_star - q_prev), 0.0, 1.0)


def update_exponent_state(state: ExponentState, q_star, ha_params: HedgeParams) -> ExponentState:
    """Refresh confidence, smoothed ratio and exponent matrix from fresh ratios.

    Confidence is the fuzziness of the term nearest each fresh ratio; at
    confidence 1 the exponent snaps to the linear map of q_star, at 0 it
    keeps its previous value.
    """
    q_star = np.asarray(q_star, dtype=np.float64)
    if q_star.shape != state.Q.shape:
        raise ValueError("q_star shape does not match the exponent state")
    if q_star.size and (q_star.min() < 0.0 or q_star.max() > 1.0):
        raise ValueError("q_star entries must lie in [0, 1]")
    table = term_table(ha_params)
    R = table.confidence(q_star.ravel()).reshape(q_star.shape)
    Q = blend_exponent_state(state.Q, q_star, R)
    M = Q * (state.m_max - state.m_min) + state.m_min
    return ExponentState(M=M, Q=Q, R=R, T=state.T.copy(), m_min=state.m_min, m_max=state.m_max)


def update_membership_hamfcm(distances, exponents) -> np.ndarray:
    """Membership of every element in every cluster from distance ratios.

    Uses the classic exact row minimizer, 1/(M - 1) on squared distances,
    so with a constant exponent the objective cannot increase across
    iterations.  Rows containing a zero distance get the one-hot rule
    instead: equal shares over the coincident centroids, zero elsewhere.
    """
    D = _as_matrix(distances, "distances")
    M = _as_matrix(exponents, "exponents")
    if D.shape != M.shape:
        raise ValueError("distances and exponents must share a shape")
    if np.any(M <= 1.0):
        raise ValueError("exponents must be greater than 1")
    zero_rows = (D == 0.0).any(axis=1)
    U = np.empty_like(D)
    ok = ~zero_rows
    if ok.any():
        Dv = D[ok]
        power = 1.0 / (M[ok] - 1.0)
        ratio = Dv[:, :, None] / Dv[:, None, :]
        with np.errstate(over="ignore"):
            U[ok] = 1.0 / np.power(ratio, power[:, :, None]).sum(axis=2)
    if zero_rows.any():
        hits = D[zero_rows] == 0.0
        U[zero_rows] = hits / hits.sum(axis=1, keepdims=True)
    return U


def update_centroids_hamfcm(data, membership, exponents, rng=None) -> np.ndarray:
    """Exponent-weighted mean of the data per cluster.

    A cluster whose weights sum to zero is reseeded from a random data row;
    that signals an empty cluster and is logged.
    """
    X = _as_matrix(data, "data")
    U = _as_matrix(membership, "membership")
    M = _as_matrix(exponents, "exponents")
    if U.shape != M.shape or U.shape[0] != X.shape[0]:
        raise ValueError("data, membership and exponents have inconsistent shapes")
    W = U**M
    weights = W.sum(axis=0)
    C = np.zeros((U.shape[1], X.shape[1]))
    filled = weights > 0
    if filled.any():
        C[filled] = (W.T[filled] @ X) / weights[filled, None]
    if not filled.all():
        rng = np.random.default_rng() if rng is None else rng
        for k in np.flatnonzero(~filled):
            row = int(rng.integers(X.shape[0]))
            C[k] = X[row]
            logger.warning("cluster %d has zero weight; reseeded from data row %d", k, row)
    return C


def objective(data, centroids, membership, exponents) -> float:
    """Exponent-weighted total squared distance."""
    U = _as_matrix(membership, "membership")
    M = _as_matrix(exponents, "exponents")
    D = pairwise_distances(data, centroids)
    if U.shape != D.shape or M.shape != D.shape:
        raise ValueError("membership/exponent shapes do not match the distance matrix")
    return float(np.sum(U**M * D))


def exponent_fuzzy_set(exponents, confidences) -> list[tuple[float, float]]:
    """Discrete fuzzy set of exponent values: (m, max confidence) sorted by m."""
    M = np.asarray(exponents, dtype=np.float64).ravel()
    R = np.asarray(confidences, dtype=np.float64).ravel()
    if M.shape != R.shape:
        raise ValueError("exponents and confidences must share a shape")
    values, inverse = np.unique(M, return_inverse=True)
    best = np.zeros(values.shape)
    np.maximum.at(best, inverse, R)
    return list(zip(values.tolist(), best.tolist()))


def _init_centroids(X: np.ndarray, c: int, rng: np.random.Generator, exponent: float) -> np.ndarray:
    """Centroids from a random row-stochastic membership matrix.

    Mirrors starting the alternation at the centroid step with random
    memberships; the weighted means keep every starting cluster non-empty.
    """
    distinct = np.unique(X, axis=0)
    if distinct.shape[0] < c:
        raise InitializationError(
            f"need at least {c} distinct rows to seed {c} clusters, found {distinct.shape[0]}"
        )
    U0 = rng.random((X.shape[0], c))
    U0 /= U0.sum(axis=1, keepdims=True)
    W = U0**exponent
    return (W.T @ X) / W.sum(axis=0)[:, None]


def run_fcm(data, n_clusters: int, m: float = 2.0, *, epsilon: float = 1e-6,
            max_iter: int = 300, seed: int | None = None) -> ClusterResult:
    """Classic fuzzy c-means with a fixed exponent.

    Alternates the membership and centroid updates from seeded random
    centroids until the largest centroid movement drops below epsilon or
    max_iter is reached.
    """
    X = _as_matrix(data, "data")
    n = X.shape[0]
    if not 2 <= n_clusters <= n:
        raise ValueError(f"n_clusters must be in [2, {n}], got {n_clusters}")
    if m <= 1.0:
        raise ValueError("the exponent m must be greater than 1")
    if epsilon <= 0 or max_iter < 1:
        raise ValueError("epsilon must be positive and max_iter at least 1")

    rng = np.random.default_rng(seed)
    C = _init_centroids(X, n_clusters, rng, m)
    M = np.full((n, n_clusters), float(m))
    trace: list[float] = []
    U = np.zeros((n, n_clusters))
    converged = False
    iterations = 0
    for _ in range(max_iter):
        D = pairwise_distances(X, C)
        U = update_membership_hamfcm(D, M)
        trace.append(float(np.sum(U**M * D)))
        C_new = update_centroids_hamfcm(X, U, M, rng)
        moved = float(np.max(np.abs(C_new - C)))
        C = C_new
        iterations += 1
        if moved < epsilon:
            converged = True
            break

    return ClusterResult(
        centroids=C,
        membership=U,
        labels=U.argmax(axis=1),
        objective_trace=trace,
        iterations=iterations,
        converged=converged,
    )


def run_hamfcm(data, config: ClusterConfig) -> ClusterResult:
    """Adaptive-exponent fuzzy c-means.

    Per iteration: refresh the exponent matrix from relative distances,
    evaluate the objective and freeze/roll back the hedge parameters on the
    first increase, otherwise grow them from the mapping errors, then update
    membership and centroids.  Rows touching a centroid exactly keep their
    previous exponent row and get one-hot membership.
    """
    X = _as_matrix(data, "data")
    n = X.shape[0]
    config.validate(n)
    c = config.n_clusters

    rng = np.random.default_rng(config.seed)
    C = _init_centroids(X, c, rng, config.m_min)
    state = ExponentState.initial(n, c, config.m_min, config.m_max)
    params = normalize_params(config.ha_params)
    prev_params = params  # value before the most recent applied update
    U = np.zeros((n, c))
    j_old = np.inf
    update_ha = True
    frozen_at: int | None = None
    trace: list[float] = []
    ha_trace: list[HedgeParams] = []
    converged = False
    iterations = 0

    for t in range(config.max_iter):
        D = pairwise_distances(X, C)
        zero_rows = (D == 0.0).any(axis=1)
        valid = ~zero_rows
        if valid.any():
            T_valid = relative_distances(D[valid])
            q_star = state.Q.copy()
            q_star[valid] = normalize_relative(T_valid)
            new_state = update_exponent_state(state, q_star, params)
            new_state.T[valid] = T_valid
            if zero_rows.any():  # coincident rows keep their previous state
                for name in ("M", "Q", "R", "T"):
                    getattr(new_state, name)[zero_rows] = getattr(state, name)[zero_rows]
            state = new_state

        j = float(np.sum(U**state.M * D))
        if j > j_old and update_ha:
            update_ha = False
            frozen_at = t
            params = prev_params
        j_old = j
        trace.append(j)

        if update_ha:
            if config.ha_update_cap is not None and t >= config.ha_update_cap:
                update_ha = False
                frozen_at = t
            else:
                prev_params = params
                params = normalize_params(_accumulate_hedge_updates(params, state.Q))
        ha_trace.append(params)

        U = update_membership_hamfcm(D, state.M)
        C_new = update_centroids_hamfcm(X, U, state.M, rng)
        moved = float(np.max(np.abs(C_new - C)))
        C = C_new
        iterations += 1
        if moved < config.epsilon:
            converged = True
            break

    return ClusterResult(
        centroids=C,
        membership=U,
        labels=U.argmax(axis=1),
        objective_trace=trace,
        iterations=iterations,
        converged=converged,
        final_ha_params=params,
        exponent_fuzzy_set=exponent_fuzzy_set(state.M, state.R),
        exponents=state.M,
        confidences=state.R,
        ha_param_trace=ha_trace,
        ha_frozen_at=frozen_at,
    )


def _accumulate_hedge_updates(params: HedgeParams, Q: np.ndarray) -> HedgeParams:
    """Sum the per-entry error updates over the whole Q matrix.

    Equivalent to applying :func:`hedges.apply_error_update` once per entry
    with the entry's nearest term and mapping error, without intermediate
    normalization.
    """
    table = term_table(params)
    q = Q.ravel()
    idx = table.nearest_indices(q)
    err = np.abs(table.rep_v[idx] - q)
    totals = np.bincount(idx, weights=err, minlength=len(table.rep_v))
    d_mu = table.rep_hedge_counts.T @ totals
    d_fm = np.bincount(table.rep_generator_index, weights=totals, minlength=2)
    return replace(
        params,
        fm_small=params.fm_small + d_fm[0],
        fm_big=params.fm_big + d_fm[1],
        mu_less=params.mu_less + d_mu[0],
        mu_possibly=params.mu_possibly + d_mu[1],
        mu_more=params.mu_more + d_mu[2],
        mu_very=params.mu_very + d_mu[3],
    )


def result_document(result: ClusterResult) -> dict:
    """JSON-ready view of a result, stable across reruns of the same inputs."""
    return {
        "centroids": result.centroids.tolist(),
        "labels": [int(x) for x in result.labels],
        "objective_trace": [float(j) for j in result.objective_trace],
        "iterations": result.iterations,
        "converged": result.converged,
        "ha_params": result.final_ha_params.as_dict() if result.final_ha_params else None,
        "exponent_fuzzy_set": [[float(m), float(r)] for m, r in result.exponent_fuzzy_set],
    }
