"""Bag-of-words vectorization: tokenizer, vocabulary, document-term matrix.

Each relevant answer is one document. Tokens are unigrams over Unicode
letters, so umlauts and other non-ASCII letters stay intact; counts go
into a sparse coordinate-list matrix keyed by (doc ordinal, term ordinal).
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .jsonio import write_canonical_json

logger = logging.getLogger(__name__)

# runs of Unicode letters: \w minus digits and underscore
_LETTER_RUN = re.compile(r"[^\W\d_]+")

# deliberately minimal built-in list; a corpus-appropriate stopword file
# can be supplied through the pipeline config
DEFAULT_STOPWORDS = frozenset({
    "an", "and", "are", "as", "at", "be", "by", "for", "from", "in", "is",
    "it", "of", "on", "or", "that", "the", "this", "to", "was", "were", "with",
    "als", "auch", "auf", "aus", "bei", "das", "dem", "den", "der", "des",
    "die", "ein", "eine", "für", "ist", "mit", "sind", "und", "von", "wird",
    "werden", "zu",
})


class EmptyVocabularyError(Exception):
    """No term survived vocabulary construction."""


@dataclass(frozen=True)
class TokenConfig:
    min_length: int = 2
    stopwords: frozenset[str] = DEFAULT_STOPWORDS


@dataclass(frozen=True)
class Vocabulary:
    """Bijection between terms and [0, V), in ascending lexicographic order."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if list(self.terms) != sorted(set(self.terms)):
            raise ValueError("vocabulary terms must be unique and sorted")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


@dataclass(frozen=True)
class DocTermMatrix:
    """Sparse per-document term counts over answer-documents.

    `entries` maps (doc ordinal, term ordinal) to a positive count;
    `doc_ids` labels each row with its (source_id, chunk_index) origin.
    """

    n_docs: int
    n_terms: int
    entries: dict[tuple[int, int], int]
    doc_ids: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        if len(self.doc_ids) != self.n_docs:
            raise ValueError("doc_ids length must equal n_docs")
        docs_with_entries = {d for d, _ in self.entries}
        if any(c <= 0 for c in self.entries.values()):
            raise ValueError("all stored counts must be positive")
        if docs_with_entries != set(range(self.n_docs)):
            raise ValueError("every doc ordinal must have at least one entry")

    @property
    def total_tokens(self) -> int:
        return sum(self.entries.values())

    def term_counts(self) -> list[int]:
        """Corpus-wide count per term ordinal."""
        counts = [0] * self.n_terms
        for (_, w), c in self.entries.items():
            counts[w] += c
        return counts


def tokenize(text: str, cfg: TokenConfig = TokenConfig()) -> list[str]:
    """Lowercase and split on non-letters, dropping short tokens and stopwords."""
    tokens = _LETTER_RUN.findall(text.lower())
    return [t for t in tokens if len(t) >= cfg.min_length and t not in cfg.stopwords]


def load_stopwords(path: Path | str) -> frozenset[str]:
    """Read a stopword file: one term per line, `#` comments ignored."""
    words: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return frozenset(words)


def build_vocabulary(docs: Sequence[Sequence[str]], min_doc_count: int = 1) -> Vocabulary:
    """Collect terms appearing in at least `min_doc_count` distinct docs."""
    if min_doc_count < 1:
        raise ValueError("min_doc_count must be >= 1")
    doc_freq: Counter[str] = Counter()
    for doc in docs:
        doc_freq.update(set(doc))
    terms = tuple(sorted(t for t, n in doc_freq.items() if n >= min_doc_count))
    if not terms:
        raise EmptyVocabularyError(
            f"no term appears in >= {min_doc_count} document(s)"
        )
    return Vocabulary(terms)


def build_dtm(
    docs: Sequence[Sequence[str]],
    vocab: Vocabulary,
    doc_ids: Sequence[tuple[str, int]] | None = None,
) -> DocTermMatrix:
    """Count term occurrences per document.

    Documents whose tokens all fall outside the vocabulary are dropped with
    a logged warning and excluded from doc_ids.
    """
    if len(vocab) == 0:
        raise ValueError("vocabulary must be non-empty")
    if doc_ids is None:
        doc_ids = [("", i) for i in range(len(docs))]
    if len(doc_ids) != len(docs):
        raise ValueError("doc_ids must parallel docs")
    entries: dict[tuple[int, int], int] = {}
    kept_ids: list[tuple[str, int]] = []
    for doc, doc_id in zip(docs, doc_ids):
        counts = Counter(vocab.index[t] for t in doc if t in vocab)
        if not counts:
            logger.warning("document %r has no in-vocabulary tokens, dropped", doc_id)
            continue
        d = len(kept_ids)
        kept_ids.append(tuple(doc_id))
        for w, c in counts.items():
            entries[(d, w)] = c
    if not kept_ids:
        raise EmptyVocabularyError("no document has in-vocabulary tokens")
    return DocTermMatrix(
        n_docs=len(kept_ids),
        n_terms=len(vocab),
        entries=entries,
        doc_ids=tuple(kept_ids),
    )


def dtm_to_dict(dtm: DocTermMatrix, vocab: Vocabulary) -> dict[str, Any]:
    """JSON-ready form: vocab, doc_ids, and [d, w, count] triples sorted by d, w."""
    return {
        "vocab": list(vocab.terms),
        "doc_ids": [[sid, idx] for sid, idx in dtm.doc_ids],
        "entries": [[d, w, c] for (d, w), c in sorted(dtm.entries.items())],
    }


def write_dtm_json(dtm: DocTermMatrix, vocab: Vocabulary, path: Path | str) -> Path:
    return write_canonical_json(dtm_to_dict(dtm, vocab), path)


def dtm_from_dict(obj: dict[str, Any]) -> tuple[DocTermMatrix, Vocabulary]:
    vocab = Vocabulary(tuple(obj["vocab"]))
    doc_ids = tuple((sid, int(idx)) for sid, idx in obj["doc_ids"])
    entries = {(int(d), int(w)): int(c) for d, w, c in obj["entries"]}
    dtm = DocTermMatrix(
        n_docs=len(doc_ids), n_terms=len(vocab), entries=entries, doc_ids=doc_ids
    )
    return dtm, vocab
