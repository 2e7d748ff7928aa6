import json
import math

import numpy as np
import pytest

from classplit.errors import DimensionMismatch, EmptyCorpus, MissingMethod, SchemaError
from classplit.semvec import (
    GibbsLda,
    build_bags,
    build_vocabulary,
    cosine_matrix,
    lda_embed,
    load_vectors,
    lsi_embed,
    tfidf_matrix,
)

from conftest import make_facts


class TestTfidf:
    def test_single_doc_zero_weight(self):
        x, vocab = tfidf_matrix([{"a": 1}])
        assert vocab == ["a"]
        assert x.shape == (1, 1)
        assert x[0, 0] == 0.0  # ln(1/1)

    def test_disjoint_terms(self):
        x, vocab = tfidf_matrix([{"a": 1}, {"b": 1}])
        assert vocab == ["a", "b"]
        assert x[0, 0] == pytest.approx(math.log(2))
        assert x[0, 1] == 0.0
        assert x[1, 1] == pytest.approx(math.log(2))

    def test_raw_count_scaling(self):
        x, _ = tfidf_matrix([{"a": 3}, {"b": 1}])
        assert x[0, 0] == pytest.approx(3 * math.log(2))

    def test_empty_bag_among_others(self):
        x, _ = tfidf_matrix([{"a": 1}, {}])
        assert np.all(x[1] == 0.0)

    def test_all_empty_raises(self):
        with pytest.raises(EmptyCorpus):
            tfidf_matrix([{}, {}])

    def test_vocabulary_sorted(self):
        assert build_vocabulary([{"z": 1, "a": 2}, {"m": 1}]) == ["a", "m", "z"]


class TestLsi:
    def test_rank_one_matrix_reproduces_row_norms(self):
        bags = [{"a": 1}, {"a": 2}, {}]
        emb = lsi_embed(bags, k=8)
        x, _ = tfidf_matrix(bags)
        assert emb.dim == 1
        norms = np.linalg.norm(x, axis=1)
        assert np.allclose(np.abs(emb.data[:, 0]), norms, atol=1e-12)

    def test_rank_capped_at_n_minus_one(self):
        emb = lsi_embed([{"a": 1}, {"b": 1}, {"c": 1}], k=3)
        assert emb.data.shape == (3, 2)

    def test_rank_capped_at_vocab(self):
        bags = [{"a": 1}, {"b": 2}, {"a": 1, "b": 1}, {"b": 1}]
        emb = lsi_embed(bags, k=32)
        assert emb.data.shape == (4, 2)

    def test_sign_canonicalization(self):
        emb = lsi_embed([{"a": 1}, {"a": 2}, {}], k=1)
        col = emb.data[:, 0]
        assert col[int(np.argmax(np.abs(col)))] > 0

    def test_deterministic(self):
        bags = [{"a": 2, "b": 1}, {"b": 1, "c": 4}, {"c": 1}]
        a = lsi_embed(bags, k=4).data
        b = lsi_embed(bags, k=4).data
        assert np.array_equal(a, b)

    def test_gram_error_nonincreasing_in_rank(self):
        rng = np.random.default_rng(5)
        terms = [f"t{i}" for i in range(9)]
        bags = [
            {t: int(c) for t, c in zip(terms, rng.integers(0, 4, size=9)) if c > 0}
            for _ in range(7)
        ]
        x, _ = tfidf_matrix(bags)
        gram = x @ x.T
        max_r = min(x.shape[0] - 1, x.shape[1])
        errors = []
        for r in range(1, max_r + 1):
            e = lsi_embed(bags, k=r).data
            errors.append(np.linalg.norm(gram - e @ e.T))
        for lo, hi in zip(errors[1:], errors[:-1]):
            assert lo <= hi + 1e-9

    def test_empty_all_raises(self):
        with pytest.raises(EmptyCorpus):
            lsi_embed([{}])

    def test_bad_k(self):
        with pytest.raises(ValueError):
            lsi_embed([{"a": 1}], k=0)


class TestLda:
    def test_rows_are_distributions(self):
        bags = [{"a": 2, "b": 1}, {"c": 3}, {}]
        emb = lda_embed(bags, topics=4, iterations=20, seed=3)
        assert emb.data.shape == (3, 4)
        assert np.all(emb.data >= 0)
        assert np.allclose(emb.data.sum(axis=1), 1.0, atol=1e-9)

    def test_empty_doc_uniform(self):
        emb = lda_embed([{"a": 1}, {}], topics=5, iterations=10, seed=0)
        assert np.allclose(emb.data[1], 0.2, atol=1e-12)

    def test_deterministic_and_seed_sensitive(self):
        bags = [{"a": 2, "b": 1}, {"b": 2, "c": 1}, {"c": 2}]
        a = lda_embed(bags, topics=3, iterations=50, seed=9).data
        b = lda_embed(bags, topics=3, iterations=50, seed=9).data
        c = lda_embed(bags, topics=3, iterations=50, seed=10).data
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_all_empty_raises(self):
        with pytest.raises(EmptyCorpus):
            lda_embed([{}, {}], topics=2, iterations=1)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            lda_embed([{"a": 1}], topics=1, iterations=1)
        with pytest.raises(ValueError):
            lda_embed([{"a": 1}], topics=2, iterations=0)

    def test_counts_conserved_every_sweep(self):
        rng = np.random.default_rng(2)
        docs = [list(rng.integers(0, 6, size=rng.integers(0, 9))) for _ in range(5)]
        sampler = GibbsLda(docs, n_topics=3, vocab_size=6, alpha=0.5, beta=0.01, seed=4)
        total = sampler.total_tokens
        lengths = [len(d) for d in docs]
        for _ in range(10):
            sampler.sweep()
            assert sampler.doc_topic.sum() == total
            assert sampler.topic_word.sum() == total
            assert sampler.topic_totals.sum() == total
            assert np.all(sampler.doc_topic >= 0)
            assert np.all(sampler.topic_word >= 0)
            assert list(sampler.doc_topic.sum(axis=1)) == lengths
            assert np.array_equal(
                sampler.topic_word.sum(axis=1), sampler.topic_totals
            )

    def test_separates_disjoint_vocabularies(self):
        group_a = [{f"alpha{i}": 2, f"alpha{(i + 1) % 4}": 1} for i in range(4)]
        group_b = [{f"beta{i}": 2, f"beta{(i + 1) % 4}": 1} for i in range(4)]
        emb = lda_embed(group_a + group_b, topics=2, iterations=500, alpha=0.1, seed=1)
        sim = cosine_matrix(emb)
        ok = 0
        total = 0
        for i in range(8):
            for j in range(i + 1, 8):
                within = (i < 4) == (j < 4)
                total += 1
                cross = [sim[a, b] for a in range(4) for b in range(4, 8)]
                if within and sim[i, j] > np.mean(cross):
                    ok += 1
                elif not within and sim[i, j] <= np.max(sim):
                    ok += 1
        assert ok / total >= 0.9


class TestCosineMatrix:
    def test_orthogonal(self):
        sim = cosine_matrix(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert sim[0, 1] == 0.0

    def test_identical(self):
        sim = cosine_matrix(np.array([[2.0, 1.0], [2.0, 1.0]]))
        assert sim[0, 1] == pytest.approx(1.0)

    def test_forty_five_degrees(self):
        sim = cosine_matrix(np.array([[1.0, 0.0], [1.0, 1.0]]))
        assert sim[0, 1] == pytest.approx(1 / math.sqrt(2))

    def test_zero_row(self):
        sim = cosine_matrix(np.array([[0.0, 0.0], [1.0, 1.0]]))
        assert sim[0, 1] == 0.0
        assert sim[0, 0] == 1.0  # diagonal convention holds for zero rows

    def test_symmetric_unit_diagonal_bounded(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=(6, 3))
        sim = cosine_matrix(x)
        assert np.array_equal(sim, sim.T)
        assert np.all(np.diag(sim) == 1.0)
        assert np.all(sim >= -1.0) and np.all(sim <= 1.0)


class TestLoadVectors:
    def facts(self, n=3):
        return make_facts([(set(), {}, 0)] * n)

    def file_for(self, vectors, dim=4, model="bert"):
        return json.dumps({"model": model, "dim": dim, "vectors": vectors})

    def test_loads_aligned_rows(self):
        vectors = {str(i): [float(i)] * 4 for i in range(3)}
        fm = load_vectors(self.file_for(vectors), self.facts())
        assert fm.data.shape == (3, 4)
        assert fm.kind == "imported:bert"
        assert np.all(fm.data[2] == 2.0)

    def test_missing_method(self):
        vectors = {"0": [0.0] * 4, "2": [0.0] * 4}
        with pytest.raises(MissingMethod) as exc:
            load_vectors(self.file_for(vectors), self.facts())
        assert exc.value.method_id == 1

    def test_mixed_dims(self):
        vectors = {"0": [0.0] * 4, "1": [0.0] * 3, "2": [0.0] * 4}
        with pytest.raises(DimensionMismatch):
            load_vectors(self.file_for(vectors), self.facts())

    def test_non_finite_entry(self):
        vectors = {"0": [0.0] * 4, "1": [float("nan")] * 4, "2": [0.0] * 4}
        text = json.dumps(
            {"model": "bert", "dim": 4, "vectors": vectors}, allow_nan=True
        )
        with pytest.raises(SchemaError):
            load_vectors(text, self.facts())

    def test_missing_field(self):
        with pytest.raises(SchemaError):
            load_vectors(json.dumps({"model": "bert", "dim": 4}), self.facts())


def test_build_bags_order():
    facts = make_facts(
        [(set(), {}, 0), (set(), {}, 0)],
        blobs=["return nodes;", "parse parse"],
    )
    assert build_bags(facts) == [{"node": 1}, {"parse": 2}]
