"""Scikit-learn style estimators wrapping the splitting pipeline.

``GodClassSplitter`` takes parsed class facts and exposes the familiar
``fit`` / ``fit_predict`` / ``get_params`` surface, so it drops into tooling
that already speaks the scikit-learn clusterer protocol. ``OpticsPartitioner``
is the lower half on its own: density clustering over any precomputed
method-similarity matrix.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .cluster import ClusterConfig, cluster_methods, optics_labels, similarity_to_distance
from .pipeline import evaluate, refactor, spec_from_options
from .validation import check_facts, check_similarity_matrix


class GodClassSplitter(ClusterMixin, BaseEstimator):
    """Split a low-cohesion class into cohesive method groups.

    Parameters mirror the pipeline's model options; see ``ModelSpec``. The
    estimator is deterministic for a fixed ``seed``.

    Attributes set by ``fit``: ``labels_``, ``n_clusters_``, ``partition_``,
    ``similarity_``, ``features_``, ``report_``, ``train_result_``.
    """

    def __init__(
        self,
        graph: str = "vgae",
        embedding: str = "lsi",
        seed: int = 0,
        hidden: int = 32,
        latent: int = 16,
        epochs: int = 200,
        learning_rate: float = 0.01,
        min_methods: int = 3,
        xi: float = 0.05,
        threshold: float = 0.0,
        weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3),
        structural_weights: tuple[float, float] = (0.5, 0.5),
        lsi_rank: int = 32,
        lda_topics: int = 10,
        lda_iterations: int = 1000,
        lda_alpha: float | None = None,
        lda_beta: float = 0.01,
        vectors_path: str | None = None,
    ) -> None:
        self.graph = graph
        self.embedding = embedding
        self.seed = seed
        self.hidden = hidden
        self.latent = latent
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.min_methods = min_methods
        self.xi = xi
        self.threshold = threshold
        self.weights = weights
        self.structural_weights = structural_weights
        self.lsi_rank = lsi_rank
        self.lda_topics = lda_topics
        self.lda_iterations = lda_iterations
        self.lda_alpha = lda_alpha
        self.lda_beta = lda_beta
        self.vectors_path = vectors_path

    def make_spec(self):
        """The ModelSpec equivalent of the current parameters."""
        return spec_from_options(self.get_params())

    def fit(self, X, y=None):
        """Partition the methods of one class.

        ``X`` is a :class:`~classplit.facts.ClassFacts`; ``y`` is ignored.
        """
        facts = check_facts(X)
        spec = self.make_spec()
        result = refactor(facts, spec)
        self.facts_ = facts
        self.partition_ = result.partition
        self.labels_ = np.asarray(result.partition.labels)
        self.n_clusters_ = result.partition.k
        self.similarity_ = result.similarity
        self.features_ = result.features
        self.train_result_ = result.train_result
        self.report_ = evaluate(facts, result.partition)
        return self

    def score(self, X=None, y=None) -> float:
        """Negative mean fragment LCOM of the fitted split (higher is better)."""
        check_is_fitted(self, "report_")
        return -self.report_.average_fragment_lcom

    def _more_tags(self):
        return {"X_types": ["string"], "non_deterministic": False}


class OpticsPartitioner(ClusterMixin, BaseEstimator):
    """Density clustering of methods from a precomputed similarity matrix.

    With ``reassign_noise`` (default) every method lands in a cluster and
    labels are renumbered by first appearance; otherwise raw labels are
    exposed with ``-1`` marking noise.
    """

    def __init__(self, min_methods: int = 3, xi: float = 0.05, reassign_noise: bool = True) -> None:
        self.min_methods = min_methods
        self.xi = xi
        self.reassign_noise = reassign_noise

    def fit(self, X, y=None):
        similarity = check_similarity_matrix(X)
        config = ClusterConfig(min_methods=self.min_methods, xi=self.xi)
        if self.reassign_noise:
            partition = cluster_methods(similarity, config)
            self.partition_ = partition
            self.labels_ = np.asarray(partition.labels)
            self.n_clusters_ = partition.k
        else:
            raw = optics_labels(
                similarity_to_distance(similarity), config.min_methods, config.xi
            )
            self.partition_ = None
            self.labels_ = raw
            self.n_clusters_ = int(len(set(raw[raw >= 0])))
        return self
