"""Semantic feature vectors for methods.

Each method's text blob becomes a bag of words (see :mod:`classplit.textprep`)
and the per-class corpus of bags is embedded with one of:

* latent semantic indexing: tf-idf matrix, exact singular value decomposition,
  document coordinates ``U_r @ diag(s_r)``;
* latent topic mixtures: collapsed Gibbs sampling, features are the smoothed
  document-topic proportions;
* imported vectors: pre-computed per-method embeddings (e.g. from a
  transformer encoder) loaded from a JSON vector file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Any, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyCorpus, MissingMethod, SchemaError
from .facts import ClassFacts
from .textprep import bag_of_words


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-method feature vectors: row i belongs to method id i."""

    data: np.ndarray
    kind: str
    terms: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"feature matrix must be 2-d, got shape {arr.shape}")
        object.__setattr__(self, "data", arr)

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


def build_bags(facts: ClassFacts) -> list[dict[str, int]]:
    """Bag of words of each method's text blob, in method-id order."""
    return [bag_of_words(m.text_blob) for m in facts.methods]


def build_vocabulary(bags: Sequence[dict[str, int]]) -> list[str]:
    """Sorted distinct terms across all bags."""
    vocab: set[str] = set()
    for bag in bags:
        vocab.update(bag)
    return sorted(vocab)


def tfidf_matrix(
    bags: Sequence[dict[str, int]], vocab: list[str] | None = None
) -> tuple[np.ndarray, list[str]]:
    """Raw term count times ln(n_docs / document frequency), one row per bag.

    Terms appearing in every document get weight zero; terms outside the
    vocabulary are ignored.
    """
    if not any(bags):
        raise EmptyCorpus("every method bag is empty; no terms to weight")
    if vocab is None:
        vocab = build_vocabulary(bags)
    index = {t: c for c, t in enumerate(vocab)}
    n_docs = len(bags)
    x = np.zeros((n_docs, len(vocab)), dtype=np.float64)
    df = np.zeros(len(vocab), dtype=np.int64)
    for d, bag in enumerate(bags):
        for term, count in bag.items():
            c = index.get(term)
            if c is not None:
                x[d, c] = count
                df[c] += 1
    idf = np.zeros(len(vocab), dtype=np.float64)
    seen = df > 0
    idf[seen] = np.log(n_docs / df[seen])
    return x * idf, vocab


def _canonical_signs(u: np.ndarray) -> np.ndarray:
    """Sign per column making its largest-magnitude entry positive.

    Ties go to the first (lowest-index) entry so the choice is deterministic.
    """
    signs = np.ones(u.shape[1])
    for c in range(u.shape[1]):
        col = u[:, c]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            signs[c] = -1.0
    return signs


def lsi_embed(bags: Sequence[dict[str, int]], k: int = 32) -> FeatureMatrix:
    """Rank-limited SVD coordinates of the tf-idf matrix.

    The effective rank is ``min(k, n_docs - 1, vocabulary size)``; degenerate
    corpora (no documents beyond one, or an empty vocabulary) yield a single
    all-zero dimension.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    x, vocab = tfidf_matrix(bags)
    n = x.shape[0]
    r = min(k, n - 1, len(vocab))
    if r < 1:
        return FeatureMatrix(np.zeros((n, 1)), kind="lsi", terms=tuple(vocab))
    u, s, _ = np.linalg.svd(x, full_matrices=False)
    u_r = u[:, :r] * _canonical_signs(u[:, :r])[np.newaxis, :]
    coords = u_r * s[:r][np.newaxis, :]
    return FeatureMatrix(coords, kind="lsi", terms=tuple(vocab))


class GibbsLda:
    """Collapsed Gibbs sampler over token-topic assignments.

    Exposes its count matrices so invariants (non-negativity, conservation of
    the total token count) can be checked after every sweep.
    """

    def __init__(
        self,
        docs: Sequence[Sequence[int]],
        n_topics: int,
        vocab_size: int,
        alpha: float,
        beta: float,
        seed: int = 0,
    ):
        if n_topics < 1:
            raise ValueError(f"n_topics must be >= 1, got {n_topics}")
        self.n_topics = n_topics
        self.vocab_size = vocab_size
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.docs = [np.asarray(d, dtype=np.int64) for d in docs]
        self.rng = np.random.default_rng(seed)
        d_count = len(self.docs)
        self.doc_topic = np.zeros((d_count, n_topics), dtype=np.int64)
        self.topic_word = np.zeros((n_topics, vocab_size), dtype=np.int64)
        self.topic_totals = np.zeros(n_topics, dtype=np.int64)
        self.assignments: list[np.ndarray] = []
        for d, doc in enumerate(self.docs):
            z = self.rng.integers(0, n_topics, size=len(doc))
            self.assignments.append(z)
            for w, t in zip(doc, z):
                self.doc_topic[d, t] += 1
                self.topic_word[t, w] += 1
                self.topic_totals[t] += 1

    @property
    def total_tokens(self) -> int:
        return sum(len(d) for d in self.docs)

    def sweep(self) -> None:
        """One full Gibbs pass over every token."""
        t_count = self.n_topics
        v_beta = self.vocab_size * self.beta
        doc_topic = self.doc_topic
        topic_word = self.topic_word
        totals = self.topic_totals
        alpha = self.alpha
        beta = self.beta
        for d, doc in enumerate(self.docs):
            if len(doc) == 0:
                continue
            z = self.assignments[d]
            uniforms = self.rng.random(len(doc))
            dt = doc_topic[d]
            for pos in range(len(doc)):
                w = doc[pos]
                old = z[pos]
                dt[old] -= 1
                topic_word[old, w] -= 1
                totals[old] -= 1
                acc = 0.0
                weights = np.empty(t_count)
                for t in range(t_count):
                    acc += (dt[t] + alpha) * (topic_word[t, w] + beta) / (totals[t] + v_beta)
                    weights[t] = acc
                target = uniforms[pos] * acc
                new = int(np.searchsorted(weights, target, side="right"))
                if new >= t_count:
                    new = t_count - 1
                z[pos] = new
                dt[new] += 1
                topic_word[new, w] += 1
                totals[new] += 1

    def run(self, iterations: int) -> None:
        for _ in range(iterations):
            self.sweep()

    def theta(self) -> np.ndarray:
        """Smoothed document-topic proportions; empty docs come out uniform."""
        lengths = np.array([len(d) for d in self.docs], dtype=np.float64)
        num = self.doc_topic + self.alpha
        den = lengths[:, np.newaxis] + self.n_topics * self.alpha
        return num / den


def lda_embed(
    bags: Sequence[dict[str, int]],
    topics: int = 10,
    iterations: int = 1000,
    alpha: float | None = None,
    beta: float = 0.01,
    seed: int = 0,
) -> FeatureMatrix:
    """Document-topic proportions from collapsed Gibbs sampling.

    ``alpha`` defaults to 50/topics. Token order within a document follows
    sorted term order (each term repeated by its count) so runs are
    reproducible from the seed alone.
    """
    if topics < 2:
        raise ValueError(f"topics must be >= 2, got {topics}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if alpha is None:
        alpha = 50.0 / topics
    if not any(bags):
        raise EmptyCorpus("every method bag is empty; nothing to sample")
    vocab = build_vocabulary(bags)
    index = {t: c for c, t in enumerate(vocab)}
    docs = []
    for bag in bags:
        doc: list[int] = []
        for term in sorted(bag):
            doc.extend([index[term]] * bag[term])
        docs.append(doc)
    sampler = GibbsLda(docs, topics, max(len(vocab), 1), alpha, beta, seed)
    sampler.run(iterations)
    return FeatureMatrix(sampler.theta(), kind="lda", terms=tuple(vocab))


def cosine_matrix(features: FeatureMatrix | np.ndarray) -> np.ndarray:
    """Pairwise cosine similarity of rows.

    A zero row has similarity 0 to everything else; diagonal entries are
    exactly 1 by convention, zero rows included.
    """
    x = features.data if isinstance(features, FeatureMatrix) else features
    x = np.asarray(x, dtype=np.float64)
    norms = np.linalg.norm(x, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = x / safe[:, np.newaxis]
    sim = np.clip(unit @ unit.T, -1.0, 1.0)
    np.fill_diagonal(sim, 1.0)
    return sim


def load_vectors(source: str | bytes | IO[str], facts: ClassFacts) -> FeatureMatrix:
    """Read a vector file and align rows to ``facts`` method ids.

    The file is a JSON object ``{"model": str, "dim": int, "vectors":
    {"<methodId>": [floats]}}``. Every method of the class must be present
    with a finite vector of the declared dimension.
    """
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", "$") from exc
    if not isinstance(data, dict):
        raise SchemaError("vector file must be a JSON object", "$")
    for field in ("model", "dim", "vectors"):
        if field not in data:
            raise SchemaError(f"missing required field '{field}'", "$")
    model = data["model"]
    dim = data["dim"]
    vectors = data["vectors"]
    if not isinstance(model, str) or not model:
        raise SchemaError("model must be a non-empty string", "model")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError("dim must be a positive integer", "dim")
    if not isinstance(vectors, dict):
        raise SchemaError("vectors must be an object", "vectors")
    n = facts.n_methods
    out = np.zeros((n, dim), dtype=np.float64)
    for mid in range(n):
        key = str(mid)
        if key not in vectors:
            raise MissingMethod(mid, f"vector file for {facts.class_name}")
        row = vectors[key]
        if not isinstance(row, list) or len(row) != dim:
            raise DimensionMismatch(
                f"vector for method {mid} has length {len(row) if isinstance(row, list) else 'n/a'},"
                f" expected {dim}"
            )
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise SchemaError("vector entries must be finite numbers", f"vectors[{key}][{j}]")
            out[mid, j] = float(v)
    return FeatureMatrix(out, kind=f"imported:{model}")
