"""Automated extract-class refactoring for low-cohesion Java classes.

The pipeline parses a class into method-level facts, scores pairwise method
similarity from field usage, call coupling, and identifier semantics
(optionally through a variational graph autoencoder), density-clusters the
methods, and reports cohesion/coupling before and after the split.

Typical use::

    from classplit import GodClassSplitter, parse_file

    facts = parse_file("Order.java")
    splitter = GodClassSplitter(graph="vgae", embedding="lsi").fit(facts)
    print(splitter.report_.to_markdown())
"""

from .cluster import ClusterConfig, Partition, cluster_methods, load_partition, save_partition
from .compare import CompareResult, before_after_table, emit, pivot_table, run_comparison
from .errors import (
    ChecksumMismatch,
    ClasssplitError,
    ConfigError,
    DegenerateGraph,
    DimensionMismatch,
    EmptyCorpus,
    MissingMethod,
    ModelUnavailable,
    NetworkError,
    NoClusters,
    NonFiniteLoss,
    ParseError,
    ParseQualityWarning,
    SchemaError,
    TooFewMethods,
    UnsupportedConstruct,
    WeightError,
)
from .estimator import GodClassSplitter, OpticsPartitioner
from .facts import ClassFacts, MethodFacts, load_facts, save_facts
from .javaparse import parse_class, parse_file
from .metrics import MetricsReport, lcom, mpc, split_metrics
from .pipeline import (
    ModelRun,
    ModelSpec,
    RefactorResult,
    default_specs,
    evaluate,
    refactor,
    run_model,
    spec_from_options,
)
from .semvec import FeatureMatrix, lda_embed, load_vectors, lsi_embed
from .synthetic import synthetic_class, write_corpus
from .vgae import VgaeConfig, gradient_check, train

__version__ = "0.1.0"

__all__ = [
    "ChecksumMismatch",
    "ClassFacts",
    "ClasssplitError",
    "ClusterConfig",
    "CompareResult",
    "ConfigError",
    "DegenerateGraph",
    "DimensionMismatch",
    "EmptyCorpus",
    "FeatureMatrix",
    "GodClassSplitter",
    "MethodFacts",
    "MetricsReport",
    "MissingMethod",
    "ModelRun",
    "ModelSpec",
    "ModelUnavailable",
    "NetworkError",
    "NoClusters",
    "NonFiniteLoss",
    "OpticsPartitioner",
    "ParseError",
    "ParseQualityWarning",
    "Partition",
    "RefactorResult",
    "SchemaError",
    "TooFewMethods",
    "UnsupportedConstruct",
    "VgaeConfig",
    "WeightError",
    "before_after_table",
    "cluster_methods",
    "default_specs",
    "emit",
    "evaluate",
    "gradient_check",
    "lcom",
    "lda_embed",
    "load_facts",
    "load_partition",
    "load_vectors",
    "lsi_embed",
    "mpc",
    "parse_class",
    "parse_file",
    "pivot_table",
    "refactor",
    "run_comparison",
    "run_model",
    "save_facts",
    "save_partition",
    "spec_from_options",
    "split_metrics",
    "synthetic_class",
    "train",
    "write_corpus",
    "__version__",
]
