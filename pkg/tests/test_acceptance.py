"""Acceptance suite: one test per release criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL line
per criterion. Expected values are produced by independent oracles:
exhaustive enumeration of the collapsed posterior, direct formula
evaluation with math.log, and recomputation of distances from returned
coordinates.
"""

import json
import math
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from facts.cli import main
from facts.ingest import chunk_text, clean_text, join_chunks
from facts.lda import LdaConfig, fit
from facts.report import format_percent, interpret_clusters, render_themes_text
from facts.filtering import ModelEndpointConfig
from facts.vectorize import Vocabulary
from facts.vismetrics import (
    jensen_shannon,
    mds_layout,
    relevance,
    saliency,
    term_marginals,
    top_terms,
    topic_proportions,
    term_topic_conditional,
)

from conftest import mini_manifest
from test_lda import dtm_from_docs, enumerate_posterior_means, make_state
from test_vismetrics import random_smoothed_model, stub_model


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def test_exact_inference_oracle():
    with criterion("exact-inference oracle"):
        started = time.monotonic()
        docs = [[0], [1]]
        theta_ref, _ = enumerate_posterior_means(docs, k=2, v=2, alpha=0.1, beta=0.01)
        model = fit(
            dtm_from_docs(docs, 2),
            LdaConfig(k=2, alpha=0.1, beta=0.01, sweeps=50500, burn_in=500, seed=1),
        )
        np.testing.assert_allclose(model.theta, theta_ref, atol=0.02)
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_synthetic_recovery():
    with criterion("synthetic topic recovery"):
        started = time.monotonic()
        k, v, n_docs, doc_len = 3, 50, 200, 100
        bounds = np.linspace(0, v, k + 1).astype(int)
        true_phi = np.zeros((k, v))
        for t in range(k):
            block = slice(bounds[t], bounds[t + 1])
            true_phi[t, block] = 1.0 / (bounds[t + 1] - bounds[t])

        rng = np.random.default_rng(20240601)
        entries = {}
        for d in range(n_docs):
            theta = rng.dirichlet(np.full(k, 0.4))
            topics = rng.choice(k, size=doc_len, p=theta)
            words = np.array([rng.choice(v, p=true_phi[t]) for t in topics])
            for w, c in zip(*np.unique(words, return_counts=True)):
                entries[(d, int(w))] = int(c)
        from facts.vectorize import DocTermMatrix

        dtm = DocTermMatrix(
            n_docs=n_docs, n_terms=v, entries=entries,
            doc_ids=tuple((f"d{d}", 0) for d in range(n_docs)),
        )
        model = fit(dtm, LdaConfig(k=k, sweeps=1000, burn_in=200, seed=31415))

        # greedy matching of fitted rows to planted rows by cosine similarity
        def cosine(a, b):
            return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))

        remaining_true = set(range(k))
        remaining_fit = set(range(k))
        matched = []
        while remaining_fit:
            best = max(
                ((f, t, cosine(model.phi[f], true_phi[t]))
                 for f in remaining_fit for t in remaining_true),
                key=lambda item: item[2],
            )
            matched.append(best[2])
            remaining_fit.discard(best[0])
            remaining_true.discard(best[1])
        mean_cosine = float(np.mean(matched))
        assert mean_cosine >= 0.85, f"mean cosine {mean_cosine:.3f}"
        elapsed = time.monotonic() - started
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


def test_metric_identities():
    with criterion("metric identities"):
        rng = np.random.default_rng(271828)
        for i in range(100):
            model = random_smoothed_model(
                rng, k=int(rng.integers(2, 7)), v=int(rng.integers(5, 40))
            )
            k, v = model.phi.shape
            lift = model.phi / term_marginals(model)
            ordinals = np.arange(v)
            for t in range(k):
                assert [w for w, _ in top_terms(model, t, 1.0, v)] == list(
                    np.lexsort((ordinals, -model.phi[t]))
                )
                assert [w for w, _ in top_terms(model, t, 0.0, v)] == list(
                    np.lexsort((ordinals, -lift[t]))
                )
            proportions = topic_proportions(model)
            assert abs(proportions.sum() - 1.0) < 1e-9
            for w in range(0, v, 7):
                assert abs(term_topic_conditional(model, w).sum() - 1.0) < 1e-9

        for _ in range(50):
            p = rng.dirichlet(np.full(8, 0.4))
            q = rng.dirichlet(np.full(8, 0.4))
            assert abs(jensen_shannon(p, q) - jensen_shannon(q, p)) < 1e-12
            assert -1e-12 <= jensen_shannon(p, q) <= math.log(2) + 1e-12
            assert jensen_shannon(p, p) <= 1e-12
            assert jensen_shannon(p, q) > 1e-12  # distinct rows separate

        for _ in range(25):
            n = int(rng.integers(2, 9))
            points = rng.normal(size=(n, 2))
            dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
            coords = mds_layout(dist)
            recomputed = np.linalg.norm(
                coords[:, None, :] - coords[None, :, :], axis=2
            )
            np.testing.assert_allclose(recomputed, dist, atol=1e-6)


def test_worked_values():
    with criterion("worked-value checks"):
        # Gibbs conditional: hand state, resampling token 0
        w0 = (0 + 0.1) * (0 + 0.01) / (0 + 2 * 0.01)
        w1 = (1 + 0.1) * (0 + 0.01) / (1 + 2 * 0.01)
        expected_split = w0 / (w0 + w1)
        assert expected_split == pytest.approx(0.823, abs=1e-3)
        from facts.lda import conditional_distribution

        state = make_state([[0, 1]], [0, 1], k=2, n_terms=2)
        cond = conditional_distribution(
            state, LdaConfig(k=2, alpha=0.1, beta=0.01, sweeps=2, burn_in=1), 0
        )
        assert cond[0] == pytest.approx(expected_split, abs=1e-3)

        # saliency of disjoint-support topics
        expected_saliency = 0.5 * math.log(2)
        assert expected_saliency == pytest.approx(0.3466, abs=1e-3)
        model = stub_model([[1.0, 0.0], [0.0, 1.0]], [10, 10])
        assert saliency(model)[0] == pytest.approx(expected_saliency, abs=1e-3)

        # JSD of (1,0) vs (0.5,0.5)
        expected_jsd = 0.5 * math.log(4 / 3) + 0.5 * (
            0.5 * math.log(2 / 3) + 0.5 * math.log(2)
        )
        assert expected_jsd == pytest.approx(0.2158, abs=1e-3)
        assert jensen_shannon([1.0, 0.0], [0.5, 0.5]) == pytest.approx(
            expected_jsd, abs=1e-3
        )

        # relevance blend at lambda = 0.6 with phi = 0.2, p_w = 0.1
        expected_relevance = 0.6 * math.log(0.2) + 0.4 * math.log(0.2 / 0.1)
        assert expected_relevance == pytest.approx(-0.6884, abs=1e-3)
        blended = stub_model([[0.2, 0.8], [0.0, 1.0]], [10, 10])
        assert relevance(blended, 0.6)[0, 0] == pytest.approx(
            expected_relevance, abs=1e-3
        )


def test_pipeline_determinism(tmp_path):
    with criterion("pipeline determinism"):
        started = time.monotonic()
        artifacts = {}
        for name in ("one", "two"):
            base = tmp_path / name
            base.mkdir()
            manifest = mini_manifest(base / "manifest.csv")
            config = base / "config.json"
            config.write_text(json.dumps({
                "question": "How will AI change education?",
                "manifest": str(manifest),
                "work_dir": str(base / "work"),
                "out_dir": str(base / "out"),
                "mock_mode": True,
                "lda": {"k": 3, "sweeps": 400, "burn_in": 100, "seed": 7},
            }), encoding="utf-8")
            assert main(["run", "--config", str(config)]) == 0
            artifacts[name] = {
                "answers.csv": (base / "work" / "answers.csv").read_bytes(),
                "model.json": (base / "work" / "model.json").read_bytes(),
                "visdata.json": (base / "out" / "visdata.json").read_bytes(),
                "report.html": (base / "out" / "report.html").read_bytes(),
            }
        for key in artifacts["one"]:
            assert artifacts["one"][key] == artifacts["two"][key], f"{key} differs"
        elapsed = time.monotonic() - started
        assert elapsed < 30.0, f"took {elapsed:.1f}s"


def test_format_reproduction():
    with criterion("themes-table format reproduction"):
        totals = [292, 203, 186, 174, 145]
        model = stub_model(np.full((5, 4), 0.25), totals)
        from facts.vectorize import DocTermMatrix

        dtm = DocTermMatrix(
            n_docs=1, n_terms=4,
            entries={(0, 0): 1, (0, 1): 1, (0, 2): 1, (0, 3): 1},
            doc_ids=(("a", 0),),
        )
        from facts.report import assemble_vis_data

        data = assemble_vis_data(
            model, Vocabulary(("aa", "bb", "cc", "dd")), dtm,
            "How will AI change education?", top_r=4,
        )
        themes = interpret_clusters(
            data, data.question, ModelEndpointConfig(), mock=True, table_n=3
        )
        rendered = [format_percent(t.weight) for t in themes]
        assert rendered == ["29.2", "20.3", "18.6", "17.4", "14.5"]
        assert [t.display_rank for t in themes] == [1, 2, 3, 4, 5]
        text = render_themes_text(themes)
        for percent in rendered:
            assert f"{percent}%" in text


def test_ingest_properties():
    with criterion("ingest property invariants"):
        alphabet = (
            "abcdefghijklmnopqrstuvwxyz"
            "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
            "äöüÄÖÜß0123456789"
            "     \n\n\n--.,;:!?()\t\r"
        )
        rng = random.Random(20240810)
        for case in range(10_000):
            raw = "".join(
                rng.choice(alphabet) for _ in range(rng.randrange(0, 240))
            )
            cleaned = clean_text(raw)
            assert clean_text(cleaned) == cleaned, f"case {case} not idempotent"
            if case % 10 == 0:
                limit = 3500
            else:
                limit = rng.randrange(1, 10_001)
            chunks = chunk_text(cleaned, limit)
            assert join_chunks(chunks) == cleaned, f"case {case} partition broken"
            assert all(c.char_count <= limit for c in chunks)
            assert all(c.char_count > 0 for c in chunks)
