"""End-to-end splitting pipeline and the stock model specifications.

Two lanes share the structural signals but differ in how the final method
similarity is produced:

* ``wc`` combines field-overlap, call-coupling, and semantic cosine matrices
  as a weighted average (equal thirds by default);
* ``vgae`` builds a binary method graph from the two structural signals
  (edge wherever the averaged similarity exceeds a threshold), trains a
  variational graph autoencoder with the semantic vectors as node features,
  and uses cosine similarity of the latent means.

Either way the similarity feeds density clustering and the partition is
scored with cohesion/coupling metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from . import structsim
from .cluster import ClusterConfig, Partition, cluster_methods
from .errors import ModelUnavailable, NoClusters, TooFewMethods
from .facts import ClassFacts
from .metrics import MetricsReport, split_metrics
from .semvec import FeatureMatrix, build_bags, cosine_matrix, lda_embed, load_vectors, lsi_embed
from .vgae import TrainResult, VgaeConfig, train

GRAPH_KINDS = ("wc", "vgae")
EMBEDDING_KINDS = ("lsi", "lda", "bert", "codebert")


@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to run one configuration of the pipeline."""

    name: str
    graph: str = "vgae"
    embedding: str = "lsi"
    weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    structural_weights: tuple[float, float] = (0.5, 0.5)
    threshold: float = 0.0
    lsi_rank: int = 32
    lda_topics: int = 10
    lda_iterations: int = 1000
    lda_alpha: float | None = None
    lda_beta: float = 0.01
    vgae: VgaeConfig = VgaeConfig()
    cluster: ClusterConfig = ClusterConfig()
    seed: int = 0
    vectors_path: str | None = None

    def __post_init__(self) -> None:
        if self.graph not in GRAPH_KINDS:
            raise ValueError(f"graph must be one of {GRAPH_KINDS}, got {self.graph!r}")
        if self.embedding not in EMBEDDING_KINDS:
            raise ValueError(
                f"embedding must be one of {EMBEDDING_KINDS}, got {self.embedding!r}"
            )

    @property
    def needs_imported_vectors(self) -> bool:
        return self.embedding in ("bert", "codebert")


def default_specs() -> list[ModelSpec]:
    """The eight stock configurations: both lanes times four embeddings."""
    return [
        ModelSpec(name=f"{graph}-{embedding}", graph=graph, embedding=embedding)
        for graph in GRAPH_KINDS
        for embedding in EMBEDDING_KINDS
    ]


@dataclass
class RefactorResult:
    partition: Partition
    similarity: np.ndarray
    features: FeatureMatrix
    train_result: TrainResult | None = None
    adjacency: np.ndarray | None = None


@dataclass
class ModelRun:
    spec: ModelSpec
    partition: Partition
    report: MetricsReport
    diagnostics: RefactorResult = field(repr=False, default=None)  # type: ignore[assignment]


def semantic_features(
    facts: ClassFacts, spec: ModelSpec, vectors: FeatureMatrix | None = None
) -> FeatureMatrix:
    """Per-method semantic vectors for ``spec.embedding``."""
    if spec.embedding == "lsi":
        return lsi_embed(build_bags(facts), k=spec.lsi_rank)
    if spec.embedding == "lda":
        return lda_embed(
            build_bags(facts),
            topics=spec.lda_topics,
            iterations=spec.lda_iterations,
            alpha=spec.lda_alpha,
            beta=spec.lda_beta,
            seed=spec.seed,
        )
    if vectors is not None:
        if vectors.n_rows != facts.n_methods:
            raise ModelUnavailable(
                f"imported vectors have {vectors.n_rows} rows for"
                f" {facts.n_methods} methods"
            )
        return vectors
    if spec.vectors_path is not None:
        with open(spec.vectors_path, "r", encoding="utf-8") as fh:
            return load_vectors(fh, facts)
    raise ModelUnavailable(
        f"embedding '{spec.embedding}' needs an imported vector file"
        " (pass vectors or set vectors_path)"
    )


def wc_similarity(facts: ClassFacts, spec: ModelSpec, features: FeatureMatrix) -> np.ndarray:
    """Weighted average of the two structural matrices and semantic cosine.

    The cosine matrix is floored at zero so the combination stays in [0, 1].
    """
    ssm = structsim.ssm_matrix(facts)
    cdm = structsim.cdm_matrix(facts)
    csm = np.maximum(cosine_matrix(features), 0.0)
    np.fill_diagonal(csm, 0.0)
    combined = structsim.combine([ssm, cdm, csm], list(spec.weights))
    np.fill_diagonal(combined, 1.0)
    return combined


def vgae_similarity(
    facts: ClassFacts, spec: ModelSpec, features: FeatureMatrix
) -> tuple[np.ndarray, TrainResult, np.ndarray]:
    """Latent-space cosine similarity from the trained graph autoencoder."""
    ssm = structsim.ssm_matrix(facts)
    cdm = structsim.cdm_matrix(facts)
    combined = structsim.combine([ssm, cdm], list(spec.structural_weights))
    adjacency = structsim.build_adjacency(combined, spec.threshold)
    config = replace(spec.vgae, seed=spec.seed)
    result = train(adjacency, features.data, config)
    return cosine_matrix(result.z), result, adjacency


def refactor(
    facts: ClassFacts, spec: ModelSpec, vectors: FeatureMatrix | None = None
) -> RefactorResult:
    """Produce a partition of the class's methods under one model spec.

    Raises :class:`TooFewMethods` for classes below the clustering minimum.
    When density clustering finds no clusters at all, degrades to a single
    cluster with a warning rather than failing.
    """
    facts.validate()
    n = facts.n_methods
    if n < spec.cluster.min_methods:
        raise TooFewMethods(
            f"{facts.class_name} has {n} methods, need at least {spec.cluster.min_methods}"
        )
    features = semantic_features(facts, spec, vectors)
    warnings: list[str] = []
    train_result = None
    adjacency = None
    if spec.graph == "wc":
        similarity = wc_similarity(facts, spec, features)
    else:
        similarity, train_result, adjacency = vgae_similarity(facts, spec, features)
        edges = int(adjacency.sum()) // 2
        max_edges = n * (n - 1) // 2
        if edges == 0:
            warnings.append("method graph has no edges")
        elif edges == max_edges:
            warnings.append("method graph is complete")
    try:
        partition = cluster_methods(similarity, spec.cluster)
    except NoClusters:
        partition = Partition(k=1, labels=[0] * n, noise_assigned=[])
        warnings.append("no dense method clusters found; kept all methods together")
    partition.warnings.extend(warnings)
    return RefactorResult(
        partition=partition,
        similarity=similarity,
        features=features,
        train_result=train_result,
        adjacency=adjacency,
    )


def evaluate(facts: ClassFacts, partition: Partition) -> MetricsReport:
    """Cohesion and coupling of the original class and each fragment."""
    facts.validate()
    partition.validate()
    return split_metrics(facts, partition)


def run_model(
    facts: ClassFacts, spec: ModelSpec, vectors: FeatureMatrix | None = None
) -> ModelRun:
    """Refactor and evaluate in one call."""
    result = refactor(facts, spec, vectors)
    report = evaluate(facts, result.partition)
    return ModelRun(spec=spec, partition=result.partition, report=report, diagnostics=result)


def spec_from_options(options: Mapping[str, object]) -> ModelSpec:
    """Build a ModelSpec from flat key/value options (config files, CLI).

    Unknown keys raise ValueError. Nested training and clustering settings
    use flat names: hidden, latent, epochs, learning_rate, min_methods, xi.
    """
    opts = dict(options)
    graph = str(opts.pop("graph", "vgae"))
    embedding = str(opts.pop("embedding", "lsi"))
    name = str(opts.pop("name", f"{graph}-{embedding}"))
    seed = int(opts.pop("seed", 0))  # type: ignore[call-overload]
    vgae_cfg = VgaeConfig(
        hidden=int(opts.pop("hidden", 32)),  # type: ignore[call-overload]
        latent=int(opts.pop("latent", 16)),  # type: ignore[call-overload]
        epochs=int(opts.pop("epochs", 200)),  # type: ignore[call-overload]
        learning_rate=float(opts.pop("learning_rate", 0.01)),  # type: ignore[arg-type]
        seed=seed,
    )
    cluster_cfg = ClusterConfig(
        min_methods=int(opts.pop("min_methods", 3)),  # type: ignore[call-overload]
        xi=float(opts.pop("xi", 0.05)),  # type: ignore[arg-type]
    )
    weights = opts.pop("weights", (1 / 3, 1 / 3, 1 / 3))
    structural_weights = opts.pop("structural_weights", (0.5, 0.5))
    kwargs = {}
    for key in (
        "threshold",
        "lsi_rank",
        "lda_topics",
        "lda_iterations",
        "lda_alpha",
        "lda_beta",
        "vectors_path",
    ):
        if key in opts:
            kwargs[key] = opts.pop(key)
    if opts:
        raise ValueError(f"unknown model options: {sorted(opts)}")
    return ModelSpec(
        name=name,
        graph=graph,
        embedding=embedding,
        weights=tuple(float(w) for w in weights),  # type: ignore[arg-type]
        structural_weights=tuple(float(w) for w in structural_weights),  # type: ignore[arg-type]
        vgae=vgae_cfg,
        cluster=cluster_cfg,
        seed=seed,
        **kwargs,  # type: ignore[arg-type]
    )
