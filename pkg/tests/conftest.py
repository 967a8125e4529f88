"""Shared fixtures: a controllable local HTTP server, manifest helpers,
and a small fitted topic model reused across metric and report tests."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np
import pytest

from facts import lda
from facts.harvest import MANIFEST_HEADER
from facts.vectorize import DocTermMatrix

DATA_DIR = Path(__file__).parent / "data"
MINI_CORPUS_DIR = DATA_DIR / "mini_corpus"
MINI_QUESTION = "How will AI change education?"


@dataclass
class Route:
    """Scripted response for one path: optional failures, then a payload."""

    status: int = 200
    body: bytes = b""
    content_type: str = "application/json"
    fail_times: int = 0       # respond with fail_status this many times first
    fail_status: int = 500
    hits: int = 0


@dataclass
class ScriptedServer:
    base_url: str
    routes: dict[str, Route] = field(default_factory=dict)
    requests: list[tuple[str, bytes]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


@pytest.fixture
def http_server():
    """A local HTTP server whose responses are scripted per path."""
    server_box: list[ScriptedServer] = []

    class Handler(BaseHTTPRequestHandler):
        def _respond(self, body: bytes) -> None:
            scripted = server_box[0]
            with scripted.lock:
                scripted.requests.append((self.path, body))
                route = scripted.routes.get(self.path)
                if route is None:
                    self.send_response(404)
                    self.end_headers()
                    return
                route.hits += 1
                if route.hits <= route.fail_times:
                    self.send_response(route.fail_status)
                    self.end_headers()
                    return
                payload = route.body
                status = route.status
                content_type = route.content_type
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def do_GET(self):
            self._respond(b"")

        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            self._respond(self.rfile.read(length))

        def log_message(self, *args):
            pass

    httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    scripted = ScriptedServer(base_url=f"http://127.0.0.1:{httpd.server_port}")
    server_box.append(scripted)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield scripted
    httpd.shutdown()
    thread.join()


def write_manifest(path: Path, rows: list[dict]) -> Path:
    """Write a manifest CSV from row dicts (missing fields defaulted)."""
    import csv

    defaults = {
        "source_id": "x", "url": "http://example.invalid/x.pdf",
        "title": "t", "authors": "a", "year": "2024", "source_note": "n",
    }
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for row in rows:
            merged = {**defaults, **row}
            writer.writerow([merged[key] for key in MANIFEST_HEADER])
    return path


def mini_manifest(path: Path, year: int = 2024) -> Path:
    """Manifest covering the bundled mini corpus via file:// URLs."""
    rows = []
    for doc in sorted(MINI_CORPUS_DIR.glob("d*.txt")):
        rows.append({
            "source_id": doc.stem,
            "url": doc.resolve().as_uri(),
            "title": f"Mini document {doc.stem}",
            "authors": "Example, A.",
            "year": str(year),
            "source_note": "bundled mini corpus",
        })
    return write_manifest(path, rows)


def synthetic_dtm(
    rng: np.random.Generator,
    n_docs: int = 50,
    doc_len: int = 20,
    n_terms: int = 12,
) -> DocTermMatrix:
    """Random multinomial corpus with mildly skewed term frequencies."""
    weights = rng.dirichlet(np.full(n_terms, 0.8))
    entries: dict[tuple[int, int], int] = {}
    doc_ids = []
    for d in range(n_docs):
        words = rng.choice(n_terms, size=doc_len, p=weights)
        for w, c in zip(*np.unique(words, return_counts=True)):
            entries[(d, int(w))] = int(c)
        doc_ids.append((f"doc{d:03d}", 0))
    return DocTermMatrix(
        n_docs=n_docs, n_terms=n_terms, entries=entries, doc_ids=tuple(doc_ids)
    )


def planted_topic_dtm(
    rng: np.random.Generator,
    n_topics: int = 3,
    n_docs: int = 60,
    doc_len: int = 25,
    n_terms: int = 15,
    doc_topic_alpha: float = 0.3,
) -> tuple[DocTermMatrix, np.ndarray]:
    """Corpus generated from topics concentrated on disjoint vocab blocks."""
    bounds = np.linspace(0, n_terms, n_topics + 1).astype(int)
    true_phi = np.zeros((n_topics, n_terms))
    for t in range(n_topics):
        block = slice(bounds[t], bounds[t + 1])
        true_phi[t, block] = 1.0 / (bounds[t + 1] - bounds[t])
    entries: dict[tuple[int, int], int] = {}
    doc_ids = []
    for d in range(n_docs):
        theta = rng.dirichlet(np.full(n_topics, doc_topic_alpha))
        topics = rng.choice(n_topics, size=doc_len, p=theta)
        words = np.array([rng.choice(n_terms, p=true_phi[t]) for t in topics])
        for w, c in zip(*np.unique(words, return_counts=True)):
            entries[(d, int(w))] = int(c)
        doc_ids.append((f"doc{d:03d}", 0))
    dtm = DocTermMatrix(
        n_docs=n_docs, n_terms=n_terms, entries=entries, doc_ids=tuple(doc_ids)
    )
    return dtm, true_phi


@pytest.fixture(scope="session")
def fitted_model() -> tuple[lda.LdaModel, DocTermMatrix]:
    """A small fitted model with real topic structure, shared across tests."""
    rng = np.random.default_rng(1234)
    dtm, _ = planted_topic_dtm(rng)
    cfg = lda.LdaConfig(k=3, alpha=0.1, beta=0.01, sweeps=300, burn_in=100, seed=99)
    return lda.fit(dtm, cfg), dtm
