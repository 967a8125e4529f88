#!/usr/bin/env python3
"""Generate the shared explorer test fixtures from the pipeline core.

Writes into frontend/test/fixtures/:
  visdata.json         full VisData export (all vocabulary terms shipped)
  lambda_rankings.json core top_terms output for every topic across a
                       101-value lambda grid, as ranked term-name lists
  report.html          the emitted self-contained report for the same data

The explorer's tests assert exact ranking parity against these files, so
regenerate them (and rebuild the bundle) whenever the VisData schema or
the ranking math changes:

    cd frontend && npm run deploy-assets
    python3 scripts/gen_explorer_fixture.py
"""

from pathlib import Path

import numpy as np

from facts import vismetrics
from facts.jsonio import write_canonical_json
from facts.lda import LdaConfig, fit
from facts.report import assemble_vis_data, emit_html, write_vis_json
from facts.vectorize import DocTermMatrix, Vocabulary

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

QUESTION = "How will AI change education?"

# sorted vocabulary with non-ASCII entries so the tests also pin the
# tie-break and ordering parity for characters beyond ASCII
TERMS = sorted({
    "adaptiv", "analyse", "angebot", "aufgabe", "barriere", "bewertung",
    "bildung", "daten", "didaktik", "digital", "entwicklung", "ethik",
    "feedback", "inhalt", "kompetenz", "kritisch", "lehre", "lernen",
    "lernweg", "medien", "methode", "modell", "potenzial", "schule",
    "system", "unterricht", "werkzeug", "wissen", "zugang", "änderung",
    "fördern", "übung",
})

K = 4
N_DOCS = 80
DOC_LEN = 40
SEED = 424242


def planted_corpus(rng: np.random.Generator) -> DocTermMatrix:
    v = len(TERMS)
    bounds = np.linspace(0, v, K + 1).astype(int)
    true_phi = np.zeros((K, v))
    for t in range(K):
        block = slice(bounds[t], bounds[t + 1])
        true_phi[t, block] = 1.0 / (bounds[t + 1] - bounds[t])
    entries: dict[tuple[int, int], int] = {}
    doc_ids = []
    for d in range(N_DOCS):
        theta = rng.dirichlet(np.full(K, 0.4))
        topics = rng.choice(K, size=DOC_LEN, p=theta)
        words = np.array([rng.choice(v, p=true_phi[t]) for t in topics])
        for w, c in zip(*np.unique(words, return_counts=True)):
            entries[(d, int(w))] = int(c)
        doc_ids.append((f"doc{d:03d}", 0))
    return DocTermMatrix(n_docs=N_DOCS, n_terms=v, entries=entries,
                         doc_ids=tuple(doc_ids))


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    vocab = Vocabulary(tuple(TERMS))
    dtm = planted_corpus(np.random.default_rng(SEED))
    model = fit(dtm, LdaConfig(k=K, sweeps=400, burn_in=100, seed=SEED))

    # top_r = V ships stats for the whole vocabulary, which exact
    # lambda-grid parity requires
    data = assemble_vis_data(model, vocab, dtm, QUESTION, top_r=len(TERMS))
    write_vis_json(data, FIXTURE_DIR / "visdata.json")
    emit_html(data, FIXTURE_DIR / "report.html")

    lambdas = [i / 100 for i in range(101)]
    rankings = {
        str(t): [
            [vocab.terms[w] for w, _ in vismetrics.top_terms(model, t, lam, len(TERMS))]
            for lam in lambdas
        ]
        for t in range(K)
    }
    write_canonical_json(
        {"lambdas": lambdas, "rankings": rankings},
        FIXTURE_DIR / "lambda_rankings.json",
    )
    print(f"fixtures written to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
