"""Document acquisition: manifest parsing, HTTP download, citation sidecars.

The manifest is the already-resolved list of documents to fetch (id, URL,
year, citation fields). Downloads are idempotent: a target file that
already exists is skipped, so interrupted batches can simply be re-run.
"""

from __future__ import annotations

import csv
import logging
import shutil
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlparse
from urllib.request import url2pathname

import requests

logger = logging.getLogger(__name__)

MANIFEST_HEADER = ["source_id", "url", "title", "authors", "year", "source_note"]

CITATION_FIELD_ORDER = ["source_id", "title", "authors", "year", "source_note", "url"]

RETRY_ATTEMPTS = 3


class ManifestError(Exception):
    """Hard manifest problem (bad header, duplicate source id)."""


class DuplicateSourceIdError(ManifestError):
    def __init__(self, source_id: str, line: int):
        super().__init__(f"duplicate source_id {source_id!r} at line {line}")
        self.source_id = source_id
        self.line = line


@dataclass(frozen=True)
class DocumentRef:
    """One manifest row: a document to acquire plus its citation fields."""

    source_id: str
    url: str
    title: str
    authors: str
    year: int
    source_note: str

    def validate(self) -> None:
        if not self.source_id:
            raise ValueError("source_id must be non-empty")
        parsed = urlparse(self.url)
        if not parsed.scheme or not (parsed.netloc or parsed.path):
            raise ValueError(f"url is not absolute: {self.url!r}")
        if not 1000 <= self.year <= 9999:
            raise ValueError(f"year out of range [1000, 9999]: {self.year}")


@dataclass
class FetchReport:
    """Tally of one fetch batch; downloaded + skipped + failed == refs processed."""

    downloaded: int = 0
    skipped: int = 0
    failed: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.downloaded + self.skipped + self.failed


def load_manifest(path: Path | str, year_filter: int | None = None) -> list[DocumentRef]:
    """Parse a manifest CSV into DocumentRefs, optionally restricted to one year.

    Malformed rows are logged with their line number and skipped; valid rows
    still load, in manifest order. A duplicated source_id is a hard error.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"manifest not found: {path}")
    refs: list[DocumentRef] = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"manifest is empty: {path}") from None
        if header != MANIFEST_HEADER:
            raise ManifestError(
                f"bad manifest header {header!r}, expected {MANIFEST_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(MANIFEST_HEADER):
                logger.warning("manifest line %d: expected %d fields, got %d",
                               lineno, len(MANIFEST_HEADER), len(row))
                continue
            source_id, url, title, authors, year_text, source_note = (c.strip() for c in row)
            try:
                year = int(year_text)
            except ValueError:
                logger.warning("manifest line %d: year is not an integer: %r",
                               lineno, year_text)
                continue
            ref = DocumentRef(source_id, url, title, authors, year, source_note)
            try:
                ref.validate()
            except ValueError as exc:
                logger.warning("manifest line %d: %s", lineno, exc)
                continue
            if source_id in seen:
                raise DuplicateSourceIdError(source_id, lineno)
            seen[source_id] = lineno
            if year_filter is None or year == year_filter:
                refs.append(ref)
    return refs


def target_filename(ref: DocumentRef) -> str:
    """Download target: `<source_id>` plus the URL's extension (default .pdf)."""
    suffix = Path(urlparse(ref.url).path).suffix
    return ref.source_id + (suffix if suffix else ".pdf")


def _fetch_one(
    ref: DocumentRef,
    out_dir: Path,
    session: requests.Session,
    timeout: float,
    backoff: float,
) -> tuple[str, str | None]:
    """Fetch one document. Returns (status, reason): status in {downloaded, skipped, failed}."""
    target = out_dir / target_filename(ref)
    if target.exists():
        return "skipped", None
    # write to a temp name so an interrupted download is never mistaken
    # for a complete file on re-run
    part = target.with_name(target.name + ".part")
    parsed = urlparse(ref.url)
    last_reason = "unknown error"
    for attempt in range(RETRY_ATTEMPTS):
        if attempt:
            time.sleep(backoff * 2 ** (attempt - 1))
        try:
            if parsed.scheme == "file":
                shutil.copyfile(url2pathname(parsed.path), part)
                part.replace(target)
                return "downloaded", None
            resp = session.get(ref.url, timeout=timeout)
            if resp.status_code == 200:
                part.write_bytes(resp.content)
                part.replace(target)
                return "downloaded", None
            last_reason = f"HTTP {resp.status_code}"
            if resp.status_code < 500:
                # client errors are not transient; don't burn retries
                return "failed", last_reason
        except FileNotFoundError as exc:
            return "failed", f"file not found: {exc.filename}"
        except requests.RequestException as exc:
            last_reason = f"network error: {exc.__class__.__name__}"
    return "failed", last_reason


def fetch_documents(
    refs: list[DocumentRef],
    out_dir: Path | str,
    max_parallel: int = 4,
    timeout: float = 30.0,
    backoff: float = 0.5,
) -> FetchReport:
    """Download every ref into out_dir, up to max_parallel at a time.

    Per-ref failures are recorded in the report (normalized to manifest
    order), never aborting the batch. An unwritable out_dir is a hard error.
    """
    if max_parallel < 1:
        raise ValueError("max_parallel must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not out_dir.is_dir():
        raise NotADirectoryError(f"not a directory: {out_dir}")

    report = FetchReport()
    if not refs:
        return report
    session = requests.Session()
    with ThreadPoolExecutor(max_workers=max_parallel) as pool:
        outcomes = list(
            pool.map(lambda r: _fetch_one(r, out_dir, session, timeout, backoff), refs)
        )
    for ref, (status, reason) in zip(refs, outcomes):
        if status == "downloaded":
            report.downloaded += 1
            logger.info("downloaded %s", ref.source_id)
        elif status == "skipped":
            report.skipped += 1
            logger.info("skipped %s (already present)", ref.source_id)
        else:
            report.failed += 1
            report.failures.append((ref.source_id, reason or "unknown error"))
            logger.warning("failed %s: %s", ref.source_id, reason)
    return report


def write_citation_record(ref: DocumentRef, out_dir: Path | str) -> Path:
    """Write `<source_id>.cite.txt` with one `key: value` line per field."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{ref.source_id}.cite.txt"
    lines = []
    for key in CITATION_FIELD_ORDER:
        value = getattr(ref, key)
        lines.append(f"{key}: {value}".rstrip())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
