"""Assembly of the export data set, HTML report, term tables, and themes.

VisData is the single contract between the pipeline and the embedded
explorer: topic circles (proportion + 2D coordinates) plus per-term
statistics from which any lambda ranking can be rebuilt client-side.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import vismetrics
from .filtering import ModelEndpointConfig, query_model
from .jsonio import canonical_dumps, read_json, write_canonical_json
from .lda import LdaModel
from .vectorize import DocTermMatrix, Vocabulary

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

DEFAULT_TOP_R = 30
DEFAULT_TABLE_N = 10
DEFAULT_LAMBDA = 0.6

DEFAULT_INTERPRET_TEMPLATE = """\
A topic model over answers to the research question below grouped terms \
into clusters. Name the theme of this cluster in one short phrase (one \
line, no explanation).

Question: {question}
Cluster weight: {weight} of all tokens
Top terms: {terms}"""


@dataclass(frozen=True)
class TopicSummary:
    """One topic circle: identity, display rank, weight, 2D position."""

    topic_id: int
    display_rank: int
    proportion: float
    x: float
    y: float


@dataclass(frozen=True)
class TermStats:
    """Per-term statistics; the per-topic tuples are indexed by topic_id."""

    term: str
    overall_freq: int
    est_freq: tuple[float, ...]
    log_prob: tuple[float, ...]
    log_lift: tuple[float, ...]
    conditional: tuple[float, ...]


@dataclass(frozen=True)
class VisData:
    """Everything the explorer needs, in display order."""

    question: str
    lambda_default: float
    corpus_stats: dict[str, int]
    topics: tuple[TopicSummary, ...]
    terms: tuple[TermStats, ...]
    schema_version: int = SCHEMA_VERSION


@dataclass(frozen=True)
class ClusterTheme:
    display_rank: int
    weight: float
    theme: str


def assemble_vis_data(
    model: LdaModel,
    vocab: Vocabulary,
    dtm: DocTermMatrix,
    question: str,
    lambda_default: float = DEFAULT_LAMBDA,
    top_r: int = DEFAULT_TOP_R,
) -> VisData:
    """Compute the full metric stack and package it for the explorer.

    Ships the union over topics of each topic's top `top_r` terms at
    lambda = 1; per-term log-probability and log-lift let the client
    re-rank for any other lambda.
    """
    if not 0.0 <= lambda_default <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lambda_default}")
    k = model.n_topics
    proportions = vismetrics.topic_proportions(model)
    coords = vismetrics.mds_layout(vismetrics.intertopic_distances(model))

    order = np.lexsort((np.arange(k), -proportions))
    topics = tuple(
        TopicSummary(
            topic_id=int(t),
            display_rank=rank,
            proportion=float(proportions[t]),
            x=float(coords[t, 0]),
            y=float(coords[t, 1]),
        )
        for rank, t in enumerate(order, start=1)
    )

    shipped: set[int] = set()
    for t in range(k):
        shipped.update(w for w, _ in vismetrics.top_terms(model, t, 1.0, top_r))

    p_w = vismetrics.term_marginals(model)
    overall = dtm.term_counts()
    n_t = np.asarray(model.token_topic_totals, dtype=np.float64)
    log_phi = np.log(model.phi)
    log_lift = np.log(model.phi / p_w)
    joint = model.phi * proportions[:, None]
    conditional = joint / joint.sum(axis=0)

    terms = tuple(
        TermStats(
            term=vocab.terms[w],
            overall_freq=int(overall[w]),
            est_freq=tuple(float(x) for x in model.phi[:, w] * n_t),
            log_prob=tuple(float(x) for x in log_phi[:, w]),
            log_lift=tuple(float(x) for x in log_lift[:, w]),
            conditional=tuple(float(x) for x in conditional[:, w]),
        )
        for w in sorted(shipped, key=lambda w: vocab.terms[w])
    )

    source_ids = {sid for sid, _ in dtm.doc_ids}
    stats = {
        "documents": len(source_ids),
        "answers": dtm.n_docs,
        "tokens": dtm.total_tokens,
        "vocabulary": dtm.n_terms,
    }
    return VisData(
        question=question,
        lambda_default=float(lambda_default),
        corpus_stats=stats,
        topics=topics,
        terms=terms,
    )


def vis_data_to_dict(data: VisData) -> dict[str, Any]:
    return {
        "schema_version": data.schema_version,
        "question": data.question,
        "lambda_default": data.lambda_default,
        "corpus_stats": dict(data.corpus_stats),
        "topics": [
            {
                "id": t.topic_id,
                "display_rank": t.display_rank,
                "proportion": t.proportion,
                "x": t.x,
                "y": t.y,
            }
            for t in data.topics
        ],
        "terms": [
            {
                "term": t.term,
                "overall_freq": t.overall_freq,
                "est_freq": list(t.est_freq),
                "log_prob": list(t.log_prob),
                "log_lift": list(t.log_lift),
                "conditional": list(t.conditional),
            }
            for t in data.terms
        ],
    }


def vis_data_from_dict(obj: dict[str, Any]) -> VisData:
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {obj.get('schema_version')!r}, "
            f"expected {SCHEMA_VERSION}"
        )
    return VisData(
        question=obj["question"],
        lambda_default=float(obj["lambda_default"]),
        corpus_stats={k: int(v) for k, v in obj["corpus_stats"].items()},
        topics=tuple(
            TopicSummary(
                topic_id=int(t["id"]),
                display_rank=int(t["display_rank"]),
                proportion=float(t["proportion"]),
                x=float(t["x"]),
                y=float(t["y"]),
            )
            for t in obj["topics"]
        ),
        terms=tuple(
            TermStats(
                term=t["term"],
                overall_freq=int(t["overall_freq"]),
                est_freq=tuple(float(x) for x in t["est_freq"]),
                log_prob=tuple(float(x) for x in t["log_prob"]),
                log_lift=tuple(float(x) for x in t["log_lift"]),
                conditional=tuple(float(x) for x in t["conditional"]),
            )
            for t in obj["terms"]
        ),
    )


def write_vis_json(data: VisData, path: Path | str) -> Path:
    return write_canonical_json(vis_data_to_dict(data), path)


def read_vis_json(path: Path | str) -> VisData:
    return vis_data_from_dict(read_json(path))


def _load_asset(name: str) -> str:
    return (resources.files("facts") / "assets" / name).read_text(encoding="utf-8")


def emit_html(data: VisData, path: Path | str) -> Path:
    """Write one self-contained HTML file: payload, script, and style inlined."""
    payload = canonical_dumps(vis_data_to_dict(data))
    # a "</" inside the JSON could terminate the script element early;
    # "<\/" is an equivalent JSON escape
    payload = payload.replace("</", "<\\/")
    note = ""
    if len(data.topics) == 1:
        note = (
            '<p class="single-topic-note">Only one topic was fitted; '
            "the intertopic distance map collapses to a single point.</p>\n"
        )
    html = (
        "<!doctype html>\n"
        '<html lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8">\n'
        "<title>Topic explorer</title>\n"
        f"<style>\n{_load_asset('explorer.css')}\n</style>\n"
        "</head>\n"
        "<body>\n"
        f'{note}<div id="app"></div>\n'
        f'<script type="application/json" id="visdata">{payload}</script>\n'
        f"<script>\n{_load_asset('explorer.js')}\n</script>\n"
        "</body>\n"
        "</html>\n"
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(html, encoding="utf-8")
    return path


def _ranked_terms(data: VisData, topic_id: int) -> list[TermStats]:
    """Shipped terms of one topic by descending lambda=1 relevance (ln phi)."""
    return sorted(data.terms, key=lambda t: (-t.log_prob[topic_id], t.term))


def top_terms_table(data: VisData, n: int = DEFAULT_TABLE_N) -> list[tuple[int, list[str]]]:
    """Per display-ranked cluster, its top-n terms at lambda = 1.

    `n` must not exceed the per-topic list size the data was assembled
    with; beyond that the shipped union no longer covers the ranking.
    """
    if n > len(data.terms):
        raise ValueError(f"n={n} exceeds the {len(data.terms)} shipped terms")
    table = []
    for topic in data.topics:  # already in display-rank order
        ranked = _ranked_terms(data, topic.topic_id)
        table.append((topic.display_rank, [t.term for t in ranked[:n]]))
    return table


def format_percent(proportion: float) -> str:
    return f"{proportion * 100:.1f}"


def interpret_clusters(
    data: VisData,
    question: str,
    endpoint: ModelEndpointConfig,
    mock: bool = False,
    table_n: int = DEFAULT_TABLE_N,
    template: str = DEFAULT_INTERPRET_TEMPLATE,
    complete: Callable[[str], str] | None = None,
) -> list[ClusterTheme]:
    """Ask the model to name each cluster from its weight and top terms.

    In mock mode the theme is derived deterministically from the cluster's
    three leading terms instead of calling the endpoint.
    """
    themes: list[ClusterTheme] = []
    for topic in data.topics:
        ranked = [t.term for t in _ranked_terms(data, topic.topic_id)[:table_n]]
        if mock:
            theme = "terms: " + ", ".join(ranked[:3])
        else:
            prompt = (
                template
                .replace("{question}", question)
                .replace("{weight}", format_percent(topic.proportion) + "%")
                .replace("{terms}", ", ".join(ranked))
            )
            reply = complete(prompt) if complete else query_model(prompt, endpoint)
            theme = reply.strip().splitlines()[0].strip() if reply.strip() else ""
        themes.append(
            ClusterTheme(
                display_rank=topic.display_rank,
                weight=topic.proportion,
                theme=theme,
            )
        )
    return themes


def render_themes_text(themes: Sequence[ClusterTheme]) -> str:
    """Aligned text table of cluster, weight percentage, and theme."""
    lines = [f"{'cluster':<8}{'weight':<8}theme"]
    for theme in themes:
        lines.append(
            f"{theme.display_rank:<8}{format_percent(theme.weight) + '%':<8}{theme.theme}"
        )
    return "\n".join(lines) + "\n"


def write_themes_csv(themes: Sequence[ClusterTheme], path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cluster", "weight_percent", "theme"])
        for theme in themes:
            writer.writerow([theme.display_rank, format_percent(theme.weight), theme.theme])
    return path
