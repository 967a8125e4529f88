"""Question-relevance filtering of text chunks through a local LLM endpoint.

Every chunk is sent to the configured completion endpoint with the research
question; replies starting with the NO ANSWER sentinel mark the chunk as
irrelevant. Results are checkpointed so long batches can resume, written
per article as analysis files, and exported as a CSV of relevant answers.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import threading
import time
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping, Sequence

import requests

from .ingest import Chunk
from .jsonio import canonical_dumps
from .vectorize import TokenConfig, tokenize

logger = logging.getLogger(__name__)

NO_ANSWER_SENTINEL = "NO ANSWER"

DEFAULT_PROMPT_TEMPLATE = """\
You will be given a research question and a text excerpt. If the excerpt \
contains information relevant to the question, reply with one concise answer \
drawn from the excerpt. If it contains nothing relevant, reply with exactly \
NO ANSWER.

Question: {question}

Text:
{chunk}"""

# marker the mock completer uses to locate the excerpt inside a prompt
_EXCERPT_MARKER = "\nText:\n"

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")
_TRAILING_PUNCT = re.compile(r"[\s.,;:!?]+$")

CompletionFn = Callable[[str], str]


class EmptyQuestionError(ValueError):
    """The research question is empty."""


class ModelUnavailableError(Exception):
    """The endpoint could not produce a response after all retries."""


class MalformedResponseError(Exception):
    """The endpoint responded, but not in the expected shape."""


class Verdict(str, Enum):
    RELEVANT = "Relevant"
    NOT_RELEVANT = "NotRelevant"


@dataclass(frozen=True)
class ModelEndpointConfig:
    """How to reach the completion endpoint and how hard to try."""

    base_url: str = "http://localhost:11434"
    model_name: str = "llama3.1"
    timeout: float = 120.0
    max_parallel: int = 1
    max_retries: int = 2
    response_field: str = "response"
    options: Mapping[str, object] = field(default_factory=lambda: {"temperature": 0.0})
    retry_backoff: float = 0.5

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class AnswerRecord:
    """Verdict for one chunk; `answer` is non-empty exactly when relevant."""

    source_id: str
    chunk_index: int
    verdict: Verdict
    answer: str

    def __post_init__(self) -> None:
        if (self.verdict is Verdict.RELEVANT) != bool(self.answer):
            raise ValueError("answer must be non-empty iff verdict is Relevant")


def build_prompt(question: str, chunk: Chunk, template: str = DEFAULT_PROMPT_TEMPLATE) -> str:
    """Fill the prompt template with the question and the chunk text."""
    if not question.strip():
        raise EmptyQuestionError("question must be non-empty")
    return template.replace("{question}", question).replace("{chunk}", chunk.text)


def query_model(prompt: str, cfg: ModelEndpointConfig) -> str:
    """Issue one non-streaming completion request and return the reply text.

    Transport errors and 5xx statuses are retried up to cfg.max_retries;
    anything else fails immediately.
    """
    url = cfg.base_url.rstrip("/") + "/api/generate"
    payload = {
        "model": cfg.model_name,
        "prompt": prompt,
        "stream": False,
        "options": dict(cfg.options),
    }
    attempts = 1 + cfg.max_retries
    last_error = "unknown error"
    for attempt in range(attempts):
        if attempt:
            time.sleep(cfg.retry_backoff * 2 ** (attempt - 1))
        try:
            resp = requests.post(url, json=payload, timeout=cfg.timeout)
        except requests.RequestException as exc:
            last_error = f"transport error: {exc.__class__.__name__}"
            continue
        if resp.status_code >= 500:
            last_error = f"HTTP {resp.status_code}"
            continue
        if resp.status_code != 200:
            raise ModelUnavailableError(f"endpoint returned HTTP {resp.status_code} for {url}")
        try:
            body = resp.json()
        except ValueError as exc:
            raise MalformedResponseError(f"response body is not JSON: {exc}") from exc
        if not isinstance(body, dict) or cfg.response_field not in body:
            raise MalformedResponseError(
                f"response body lacks the {cfg.response_field!r} field"
            )
        return str(body[cfg.response_field])
    raise ModelUnavailableError(
        f"endpoint unavailable after {attempts} attempt(s): {last_error}"
    )


def classify_response(raw: str) -> tuple[Verdict, str]:
    """Classify a model reply via the NO ANSWER sentinel.

    Matching is a case-insensitive prefix check after trimming and stripping
    trailing punctuation, since generative models vary casing and add periods.
    """
    normalized = _TRAILING_PUNCT.sub("", raw.strip()).upper()
    if normalized.startswith(NO_ANSWER_SENTINEL):
        return Verdict.NOT_RELEVANT, ""
    answer = raw.strip()
    if not answer:
        return Verdict.NOT_RELEVANT, ""
    return Verdict.RELEVANT, answer


def make_http_completer(cfg: ModelEndpointConfig) -> CompletionFn:
    return lambda prompt: query_model(prompt, cfg)


def make_mock_completer(question: str) -> CompletionFn:
    """Deterministic offline stand-in for the model endpoint.

    A chunk is relevant iff it shares at least one content word with the
    question; the reply echoes the first matching sentence. Requires the
    prompt to carry the excerpt after the default template's text marker.
    """
    token_cfg = TokenConfig()
    question_words = set(tokenize(question, token_cfg))

    def complete(prompt: str) -> str:
        pos = prompt.find(_EXCERPT_MARKER)
        if pos == -1:
            raise ValueError(
                "mock mode requires the prompt template to keep the "
                f"{_EXCERPT_MARKER!r} marker before the excerpt"
            )
        excerpt = prompt[pos + len(_EXCERPT_MARKER):]
        for sentence in _SENTENCE_SPLIT.split(excerpt):
            words = set(tokenize(sentence, token_cfg))
            if words & question_words:
                return sentence.strip()
        return NO_ANSWER_SENTINEL

    return complete


def _checkpoint_path(work_dir: Path) -> Path:
    return work_dir / "checkpoint.jsonl"


def _load_checkpoint(path: Path) -> dict[tuple[str, int], AnswerRecord]:
    records: dict[tuple[str, int], AnswerRecord] = {}
    if not path.is_file():
        return records
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                record = AnswerRecord(
                    source_id=obj["source_id"],
                    chunk_index=int(obj["chunk_index"]),
                    verdict=Verdict(obj["verdict"]),
                    answer=obj["answer"],
                )
            except (KeyError, ValueError, TypeError) as exc:
                logger.warning("checkpoint line %d unreadable, ignoring: %s", lineno, exc)
                continue
            records[(record.source_id, record.chunk_index)] = record
    return records


def _append_checkpoint(path: Path, record: AnswerRecord, lock: threading.Lock) -> None:
    line = canonical_dumps({
        "source_id": record.source_id,
        "chunk_index": record.chunk_index,
        "verdict": record.verdict.value,
        "answer": record.answer,
    })
    with lock:
        with path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def run_filter(
    chunks_by_doc: Mapping[str, Sequence[Chunk]],
    question: str,
    cfg: ModelEndpointConfig,
    work_dir: Path | str,
    complete: CompletionFn | None = None,
    prompt_template: str = DEFAULT_PROMPT_TEMPLATE,
) -> list[AnswerRecord]:
    """Classify every chunk, producing one AnswerRecord per chunk.

    Answers are checkpointed to `<work_dir>/checkpoint.jsonl` as they
    arrive; on a re-run, already-answered chunks are not re-queried. Each
    document gets an analysis file listing its chunks in order. Records are
    returned in (source_id, chunk_index) order regardless of scheduling.
    """
    if not question.strip():
        raise EmptyQuestionError("question must be non-empty")
    if complete is None:
        complete = make_http_completer(cfg)
    work_dir = Path(work_dir)

    all_chunks = [c for sid in sorted(chunks_by_doc) for c in chunks_by_doc[sid]]
    if not all_chunks:
        return []

    work_dir.mkdir(parents=True, exist_ok=True)
    checkpoint = _checkpoint_path(work_dir)
    done = _load_checkpoint(checkpoint)
    pending = [c for c in all_chunks if (c.source_id, c.index) not in done]
    if done:
        reused = len(all_chunks) - len(pending)
        logger.info("checkpoint: %d of %d chunk(s) already answered", reused, len(all_chunks))

    lock = threading.Lock()

    def worker(chunk: Chunk) -> AnswerRecord:
        verdict, answer = classify_response(
            complete(build_prompt(question, chunk, prompt_template))
        )
        record = AnswerRecord(chunk.source_id, chunk.index, verdict, answer)
        _append_checkpoint(checkpoint, record, lock)
        return record

    if pending:
        with ThreadPoolExecutor(max_workers=cfg.max_parallel) as pool:
            futures = {pool.submit(worker, chunk): chunk for chunk in pending}
            wait(futures, return_when=FIRST_EXCEPTION)
            errors = [f.exception() for f in futures if f.done() and f.exception()]
            if errors:
                for future in futures:
                    future.cancel()
                first = errors[0]
                if isinstance(first, ModelUnavailableError):
                    raise ModelUnavailableError(
                        f"aborting: {first} (progress checkpointed in {checkpoint}, "
                        "re-run to resume)"
                    ) from first
                raise first
            for future, chunk in futures.items():
                done[(chunk.source_id, chunk.index)] = future.result()

    records = [done[(c.source_id, c.index)] for c in all_chunks]
    _write_analysis_files(chunks_by_doc, done, work_dir / "analysis")
    return records


def _write_analysis_files(
    chunks_by_doc: Mapping[str, Sequence[Chunk]],
    records: Mapping[tuple[str, int], AnswerRecord],
    analysis_dir: Path,
) -> None:
    analysis_dir.mkdir(parents=True, exist_ok=True)
    for source_id in sorted(chunks_by_doc):
        chunks = chunks_by_doc[source_id]
        if not chunks:
            continue
        lines: list[str] = []
        for chunk in sorted(chunks, key=lambda c: c.index):
            record = records[(source_id, chunk.index)]
            lines += [f"## chunk {chunk.index}", record.verdict.value, record.answer, ""]
        (analysis_dir / f"{source_id}.txt").write_text(
            "\n".join(lines), encoding="utf-8"
        )


def export_answers_csv(records: Sequence[AnswerRecord], path: Path | str) -> Path:
    """Write relevant answers as CSV, one row per relevant chunk.

    Irrelevant chunks are omitted. Rows are ordered by (source_id,
    chunk_index); repeated exports of the same records are byte-identical.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    relevant = sorted(
        (r for r in records if r.verdict is Verdict.RELEVANT),
        key=lambda r: (r.source_id, r.chunk_index),
    )
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source_id", "chunk_index", "answer"])
        for record in relevant:
            writer.writerow([record.source_id, record.chunk_index, record.answer])
    return path


def load_answers_csv(path: Path | str) -> list[AnswerRecord]:
    """Read an answers CSV back into relevant AnswerRecords."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"answers CSV not found: {path}")
    records: list[AnswerRecord] = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["source_id", "chunk_index", "answer"]:
            raise ValueError(f"unexpected answers CSV header: {header!r}")
        for row in reader:
            if not row:
                continue
            source_id, chunk_index, answer = row
            records.append(
                AnswerRecord(source_id, int(chunk_index), Verdict.RELEVANT, answer)
            )
    return records
