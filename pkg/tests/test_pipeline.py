import json

import numpy as np
import pytest

from classplit.cluster import ClusterConfig
from classplit.errors import ModelUnavailable, NoClusters, TooFewMethods
from classplit.pipeline import (
    ModelSpec,
    default_specs,
    refactor,
    run_model,
    semantic_features,
    spec_from_options,
    vgae_similarity,
    wc_similarity,
)
from classplit.semvec import FeatureMatrix
from classplit.synthetic import synthetic_class
from classplit.vgae import VgaeConfig

from conftest import make_facts


def features_for(facts, rows):
    return FeatureMatrix(data=np.array(rows, dtype=float), kind="test", terms=None)


class TestModelSpec:
    def test_rejects_unknown_graph(self):
        with pytest.raises(ValueError):
            ModelSpec(name="x", graph="gnn")

    def test_rejects_unknown_embedding(self):
        with pytest.raises(ValueError):
            ModelSpec(name="x", embedding="word2vec")

    def test_needs_imported_vectors(self):
        assert ModelSpec(name="x", embedding="bert").needs_imported_vectors
        assert ModelSpec(name="x", embedding="codebert").needs_imported_vectors
        assert not ModelSpec(name="x", embedding="lsi").needs_imported_vectors

    def test_default_specs_cover_both_lanes(self):
        names = [s.name for s in default_specs()]
        assert names == [
            "wc-lsi",
            "wc-lda",
            "wc-bert",
            "wc-codebert",
            "vgae-lsi",
            "vgae-lda",
            "vgae-bert",
            "vgae-codebert",
        ]


class TestSemanticFeatures:
    def test_lsi_and_lda_kinds(self):
        facts = make_facts(
            [({"x"}, {}, 0)] * 3, blobs=["alpha beta", "beta gamma", "gamma"]
        )
        lsi = semantic_features(facts, ModelSpec(name="s", embedding="lsi"))
        lda = semantic_features(
            facts, ModelSpec(name="s", embedding="lda", lda_iterations=5)
        )
        assert lsi.kind == "lsi"
        assert lda.kind == "lda"

    def test_imported_embedding_without_file_fails_fast(self):
        facts = make_facts([({"x"}, {}, 0)] * 3)
        with pytest.raises(ModelUnavailable):
            semantic_features(facts, ModelSpec(name="s", embedding="bert"))

    def test_imported_vectors_used_directly(self):
        facts = make_facts([({"x"}, {}, 0)] * 3)
        vectors = features_for(facts, [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        out = semantic_features(facts, ModelSpec(name="s", embedding="bert"), vectors)
        assert out is vectors

    def test_imported_vectors_row_mismatch(self):
        facts = make_facts([({"x"}, {}, 0)] * 3)
        vectors = features_for(facts, [[1.0], [2.0]])
        with pytest.raises(ModelUnavailable):
            semantic_features(facts, ModelSpec(name="s", embedding="bert"), vectors)

    def test_vectors_path_loaded(self, tmp_path):
        facts = make_facts([({"x"}, {}, 0)] * 3, class_name="C")
        payload = {
            "model": "bert",
            "dim": 2,
            "vectors": {str(i): [float(i), 1.0] for i in range(3)},
        }
        path = tmp_path / "C.bert.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        spec = ModelSpec(name="s", embedding="bert", vectors_path=str(path))
        out = semantic_features(facts, spec)
        assert out.kind == "imported:bert"
        assert out.data.shape == (3, 2)


class TestWcSimilarity:
    def test_one_hot_entry_with_equal_weights(self):
        # methods 0 and 1 share their whole var set, no calls, orthogonal text
        facts = make_facts([({"x"}, {}, 0), ({"x"}, {}, 0), ({"y"}, {}, 0)])
        features = features_for(facts, [[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
        sim = wc_similarity(facts, ModelSpec(name="s", graph="wc"), features)
        assert sim[0, 1] == pytest.approx(1 / 3)
        assert sim[0, 2] == 0.0
        assert np.all(np.diag(sim) == 1.0)

    def test_zero_signals_zero_off_diagonal(self):
        facts = make_facts([(set(), {}, 0)] * 3)
        features = features_for(facts, [[0.0], [0.0], [0.0]])
        sim = wc_similarity(facts, ModelSpec(name="s", graph="wc"), features)
        off = sim[~np.eye(3, dtype=bool)]
        assert np.all(off == 0.0)
        assert np.all(np.diag(sim) == 1.0)

    def test_single_signal_weights(self):
        facts = make_facts([({"x", "y"}, {}, 0), ({"y"}, {}, 0), (set(), {}, 0)])
        features = features_for(facts, [[1.0], [1.0], [1.0]])
        spec = ModelSpec(name="s", graph="wc", weights=(1.0, 0.0, 0.0))
        sim = wc_similarity(facts, spec, features)
        assert sim[0, 1] == pytest.approx(0.5)  # |{y}| / |{x,y}|
        assert sim[1, 2] == 0.0

    def test_negative_cosine_floored(self):
        facts = make_facts([(set(), {}, 0), (set(), {}, 0)])
        features = features_for(facts, [[1.0], [-1.0]])
        spec = ModelSpec(name="s", graph="wc", weights=(0.0, 0.0, 1.0))
        sim = wc_similarity(facts, spec, features)
        assert sim[0, 1] == 0.0


class TestVgaeSimilarity:
    def test_outputs_consistent(self):
        group = synthetic_class(responsibilities=2, methods_per=4, seed=3)
        spec = ModelSpec(name="s", graph="vgae", vgae=VgaeConfig(epochs=20))
        features = semantic_features(group.facts, spec)
        sim, result, adjacency = vgae_similarity(group.facts, spec, features)
        n = group.facts.n_methods
        assert sim.shape == (n, n)
        assert np.allclose(sim, sim.T)
        assert np.all(np.diag(sim) == 1.0)
        assert result.z.shape == (n, spec.vgae.latent)
        assert set(np.unique(adjacency).tolist()) <= {0.0, 1.0}
        assert np.array_equal(adjacency, adjacency.T)

    def test_threshold_prunes_edges(self):
        group = synthetic_class(responsibilities=2, methods_per=4, seed=3)
        spec_low = ModelSpec(name="s", vgae=VgaeConfig(epochs=1), threshold=0.0)
        spec_high = ModelSpec(name="s", vgae=VgaeConfig(epochs=1), threshold=0.99)
        features = semantic_features(group.facts, spec_low)
        _, _, low = vgae_similarity(group.facts, spec_low, features)
        with pytest.warns(UserWarning):
            _, _, high = vgae_similarity(group.facts, spec_high, features)
        assert high.sum() <= low.sum()


class TestRefactor:
    def test_too_few_methods(self):
        facts = make_facts([({"x"}, {}, 0), ({"x"}, {}, 0)])
        with pytest.raises(TooFewMethods):
            refactor(facts, ModelSpec(name="s"))

    def test_planted_class_vgae_lsi(self):
        adjusted_rand_score = pytest.importorskip("sklearn.metrics").adjusted_rand_score
        group = synthetic_class(responsibilities=2, methods_per=8, seed=0)
        result = refactor(group.facts, ModelSpec(name="vgae-lsi"))
        assert result.partition.k == 2
        assert adjusted_rand_score(group.labels, result.partition.labels) == 1.0

    def test_planted_class_wc_lsi(self):
        adjusted_rand_score = pytest.importorskip("sklearn.metrics").adjusted_rand_score
        group = synthetic_class(responsibilities=2, methods_per=8, seed=0)
        result = refactor(group.facts, ModelSpec(name="wc-lsi", graph="wc"))
        assert result.partition.k == 2
        assert adjusted_rand_score(group.labels, result.partition.labels) == 1.0

    def test_edgeless_graph_warns(self):
        group = synthetic_class(responsibilities=2, methods_per=4, seed=1)
        spec = ModelSpec(name="s", threshold=1.0, vgae=VgaeConfig(epochs=2))
        with pytest.warns(UserWarning):
            result = refactor(group.facts, spec)
        assert any("no edges" in w for w in result.partition.warnings)

    def test_complete_graph_warns(self):
        facts = make_facts([({"x"}, {}, 0)] * 4, blobs=["same words here"] * 4)
        spec = ModelSpec(name="s", threshold=0.0, vgae=VgaeConfig(epochs=2))
        result = refactor(facts, spec)
        assert any("complete" in w for w in result.partition.warnings)

    def test_no_clusters_falls_back_to_single(self, monkeypatch):
        import classplit.pipeline as pipeline

        def boom(similarity, config):
            raise NoClusters("forced")

        monkeypatch.setattr(pipeline, "cluster_methods", boom)
        facts = make_facts(
            [({"x"}, {}, 0)] * 4,
            blobs=["alpha beta", "beta gamma", "gamma delta", "delta theta"],
        )
        result = refactor(facts, ModelSpec(name="s", graph="wc"))
        assert result.partition.k == 1
        assert result.partition.labels == [0, 0, 0, 0]
        assert any("together" in w for w in result.partition.warnings)


class TestRunModel:
    def test_report_matches_partition(self):
        group = synthetic_class(responsibilities=2, methods_per=6, seed=2)
        run = run_model(group.facts, ModelSpec(name="s", vgae=VgaeConfig(epochs=50)))
        assert len(run.report.fragments) == run.partition.k
        assert run.report.original_mpc == sum(
            m.external_call_count for m in group.facts.methods
        )

    def test_deterministic(self):
        group = synthetic_class(responsibilities=2, methods_per=6, seed=4)
        spec = ModelSpec(name="s", vgae=VgaeConfig(epochs=30))
        a = run_model(group.facts, spec)
        b = run_model(group.facts, spec)
        assert a.partition == b.partition
        assert a.report == b.report


class TestSpecFromOptions:
    def test_defaults(self):
        spec = spec_from_options({})
        assert spec.name == "vgae-lsi"
        assert spec.graph == "vgae"
        assert spec.embedding == "lsi"
        assert spec.vgae == VgaeConfig()
        assert spec.cluster == ClusterConfig()

    def test_nested_settings_flattened(self):
        spec = spec_from_options(
            {
                "name": "tuned",
                "graph": "wc",
                "embedding": "lda",
                "seed": 7,
                "hidden": 8,
                "latent": 4,
                "epochs": 10,
                "learning_rate": 0.1,
                "min_methods": 4,
                "xi": 0.2,
                "weights": [0.5, 0.25, 0.25],
                "lda_topics": 3,
            }
        )
        assert spec.name == "tuned"
        assert spec.vgae == VgaeConfig(hidden=8, latent=4, epochs=10, learning_rate=0.1, seed=7)
        assert spec.cluster == ClusterConfig(min_methods=4, xi=0.2)
        assert spec.weights == (0.5, 0.25, 0.25)
        assert spec.lda_topics == 3
        assert spec.seed == 7

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError) as exc:
            spec_from_options({"dropout": 0.5})
        assert "dropout" in str(exc.value)
