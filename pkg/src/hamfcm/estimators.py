"""Scikit-learn compatible wrappers around the clustering engines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .cluster import (
    ClusterConfig,
    pairwise_distances,
    run_fcm,
    run_hamfcm,
    update_membership_hamfcm,
)
from .hedges import HedgeParams


class FuzzyCMeans(BaseEstimator, ClusterMixin):
    """Fuzzy c-means clustering with a fixed exponent.

    Parameters
    ----------
    n_clusters : int, default=2
        Number of clusters.
    m : float, default=2.0
        Membership exponent, must be greater than 1.  Values near 1 act
        like hard k-means; large values flatten the memberships.
    epsilon : float, default=1e-6
        Largest centroid movement below which the run stops.
    max_iter : int, default=300
        Iteration cap for a single run.
    random_state : int or None, default=None
        Seed for the centroid initialization.

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
    membership_ : ndarray of shape (n_samples, n_clusters)
    labels_ : ndarray of shape (n_samples,)
    objective_trace_ : list of float
    n_iter_ : int
    converged_ : bool
    """

    def __init__(self, n_clusters=2, m=2.0, epsilon=1e-6, max_iter=300, random_state=None):
        self.n_clusters = n_clusters
        self.m = m
        self.epsilon = epsilon
        self.max_iter = max_iter
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        result = run_fcm(
            X,
            self.n_clusters,
            self.m,
            epsilon=self.epsilon,
            max_iter=self.max_iter,
            seed=self.random_state,
        )
        self.result_ = result
        self.cluster_centers_ = result.centroids
        self.membership_ = result.membership
        self.labels_ = result.labels
        self.objective_trace_ = result.objective_trace
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        return self

    def transform(self, X):
        """Soft memberships of new points against the fitted centroids."""
        check_is_fitted(self, "cluster_centers_")
        X = check_array(X, dtype=np.float64)
        D = pairwise_distances(X, self.cluster_centers_)
        M = np.full(D.shape, float(self.m))
        return update_membership_hamfcm(D, M)

    def predict(self, X):
        return self.transform(X).argmax(axis=1)


class HedgeAlgebraFCM(BaseEstimator, ClusterMixin):
    """Fuzzy c-means with a per-entry exponent matrix tuned by a hedge algebra.

    Instead of one exponent, every (element, cluster) pair carries its own
    value in [m_min, m_max], tracking the element's normalized relative
    distance to the cluster.  How fast each entry tracks is gated by the
    fuzziness of the linguistic term nearest to it, and the hedge-algebra
    parameters grow from the mapping errors until the objective first
    increases.

    Parameters
    ----------
    n_clusters : int, default=2
    m_min, m_max : float, default=(1.5, 20.0)
        Exponent range; both must exceed 1 and m_min <= m_max.
    epsilon : float, default=1e-6
    max_iter : int, default=300
    hedge_params : HedgeParams or None, default=None
        Starting algebra parameters; None means the symmetric defaults.
    ha_update_cap : int or None, default=20
        Iteration after which the algebra stops updating even without an
        objective increase; None disables the cap.
    random_state : int or None, default=None

    Attributes
    ----------
    cluster_centers_, membership_, labels_, objective_trace_, n_iter_,
    converged_ : as in :class:`FuzzyCMeans`
    exponent_matrix_ : ndarray of shape (n_samples, n_clusters)
        Final per-entry exponents.
    confidence_matrix_ : ndarray of shape (n_samples, n_clusters)
    exponent_fuzzy_set_ : list of (value, membership) pairs
    hedge_params_ : HedgeParams
        Algebra parameters at the end of the run.
    """

    def __init__(self, n_clusters=2, m_min=1.5, m_max=20.0, epsilon=1e-6,
                 max_iter=300, hedge_params=None, ha_update_cap=20, random_state=None):
        self.n_clusters = n_clusters
        self.m_min = m_min
        self.m_max = m_max
        self.epsilon = epsilon
        self.max_iter = max_iter
        self.hedge_params = hedge_params
        self.ha_update_cap = ha_update_cap
        self.random_state = random_state

    def _config(self) -> ClusterConfig:
        return ClusterConfig(
            n_clusters=self.n_clusters,
            m_min=self.m_min,
            m_max=self.m_max,
            epsilon=self.epsilon,
            max_iter=self.max_iter,
            seed=self.random_state,
            ha_params=self.hedge_params or HedgeParams(),
            ha_update_cap=self.ha_update_cap,
        )

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        result = run_hamfcm(X, self._config())
        self.result_ = result
        self.cluster_centers_ = result.centroids
        self.membership_ = result.membership
        self.labels_ = result.labels
        self.objective_trace_ = result.objective_trace
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.exponent_matrix_ = result.exponents
        self.confidence_matrix_ = result.confidences
        self.exponent_fuzzy_set_ = result.exponent_fuzzy_set
        self.hedge_params_ = result.final_ha_params
        return self

    def transform(self, X):
        """Soft memberships for new points.

        New points carry no smoothed exponent state, so their exponents come
        from the plain linear map of the batch's normalized relative
        distances; rows that touch a centroid keep m_min and get one-hot
        membership anyway.
        """
        check_is_fitted(self, "cluster_centers_")
        X = check_array(X, dtype=np.float64)
        D = pairwise_distances(X, self.cluster_centers_)
        M = np.full(D.shape, float(self.m_min))
        ok = ~(D == 0.0).any(axis=1)
        if ok.any():
            T = D[ok] / D[ok].sum(axis=1, keepdims=True)
            t_min, t_max = T.min(), T.max()
            Q = np.full_like(T, 0.5) if t_max == t_min else (T - t_min) / (t_max - t_min)
            M[ok] = Q * (self.m_max - self.m_min) + self.m_min
        return update_membership_hamfcm(D, M)

    def predict(self, X):
        return self.transform(X).argmax(axis=1)
