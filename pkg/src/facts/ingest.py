"""Text extraction, cleaning, and bounded chunking of acquired documents.

Raw extraction is delegated to a configurable external converter command;
plain `.txt` inputs pass through verbatim. Cleaning turns page-oriented
text into a single flowing line; chunking splits it into spans no longer
than a character limit, preferring to break on spaces.
"""

from __future__ import annotations

import re
import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path

DEFAULT_CHUNK_LIMIT = 3500

_PAGE_NUMBER_LINE = re.compile(r"^\s*\d+\s*$")
_HYPHEN_BREAK = re.compile(r"-\n(.)", flags=re.DOTALL)
_MULTI_SPACE = re.compile(r" {2,}")


class ExtractionFailed(Exception):
    """The external converter exited nonzero or produced no output."""

    def __init__(self, message: str, exit_status: int | None = None, diagnostics: str = ""):
        super().__init__(message)
        self.exit_status = exit_status
        self.diagnostics = diagnostics


class UnsupportedInput(Exception):
    """No extractor is configured for this input type."""


@dataclass(frozen=True)
class CleanedDocument:
    """A document reduced to one flowing line of text."""

    source_id: str
    text: str

    def __post_init__(self) -> None:
        if "\n" in self.text or "\r" in self.text:
            raise ValueError("cleaned text must not contain newlines")
        if "  " in self.text:
            raise ValueError("cleaned text must not contain double spaces")

    @property
    def char_count(self) -> int:
        return len(self.text)


@dataclass(frozen=True)
class Chunk:
    """A bounded span of cleaned text.

    `hard_cut` marks a chunk whose right boundary fell mid-word (no space
    available), so rejoining inserts nothing there; at soft boundaries the
    consumed separator space is re-inserted.
    """

    source_id: str
    index: int
    text: str
    hard_cut: bool = False

    @property
    def char_count(self) -> int:
        return len(self.text)


def extract_text(doc_path: Path | str, extractor: str | None = None) -> str:
    """Return a document's raw text.

    `.txt` files are read verbatim. Anything else is run through the
    extractor command template, which must contain an `{input}` placeholder;
    its standard output is captured as UTF-8.
    """
    doc_path = Path(doc_path)
    if not doc_path.is_file():
        raise FileNotFoundError(f"document not found: {doc_path}")
    if doc_path.suffix.lower() == ".txt":
        return doc_path.read_text(encoding="utf-8")
    if not extractor:
        raise UnsupportedInput(
            f"no extractor configured for {doc_path.suffix!r} input: {doc_path}"
        )
    argv = shlex.split(extractor)
    if not any("{input}" in arg for arg in argv):
        raise ValueError("extractor command template must contain an {input} placeholder")
    argv = [arg.replace("{input}", str(doc_path)) for arg in argv]
    proc = subprocess.run(argv, capture_output=True, text=True, encoding="utf-8")
    if proc.returncode != 0:
        raise ExtractionFailed(
            f"extractor exited with status {proc.returncode} for {doc_path}",
            exit_status=proc.returncode,
            diagnostics=proc.stderr,
        )
    if not proc.stdout.strip():
        raise ExtractionFailed(
            f"extractor produced no output for {doc_path}",
            exit_status=proc.returncode,
            diagnostics=proc.stderr,
        )
    return proc.stdout


def clean_text(raw: str, join_hyphenation: bool = True) -> str:
    """Collapse page-oriented raw text into one flowing line.

    Applied in order: join hyphenated line breaks (a `-` at end of line
    followed by a lowercase letter), drop digits-only lines (page numbers),
    turn remaining newlines into spaces, collapse space runs, trim.
    """
    text = raw.replace("\r\n", "\n").replace("\r", "\n")
    if join_hyphenation:
        text = _HYPHEN_BREAK.sub(
            lambda m: m.group(1) if m.group(1).isalpha() and m.group(1).islower()
            else m.group(0),
            text,
        )
    lines = [line for line in text.split("\n") if not _PAGE_NUMBER_LINE.match(line)]
    text = " ".join(lines)
    text = _MULTI_SPACE.sub(" ", text)
    return text.strip()


def chunk_text(
    cleaned: str, limit: int = DEFAULT_CHUNK_LIMIT, source_id: str = ""
) -> list[Chunk]:
    """Split cleaned text greedily into chunks of at most `limit` characters.

    Each boundary is placed at the last space that keeps the left chunk
    within the limit; when the window contains no space the text is cut
    hard at exactly `limit`. Boundary spaces belong to neither chunk:
    `join_chunks` restores them.
    """
    if limit < 1:
        raise ValueError(f"chunk limit must be positive, got {limit}")
    chunks: list[Chunk] = []
    rest = cleaned
    index = 0
    while rest:
        if len(rest) <= limit:
            chunks.append(Chunk(source_id, index, rest))
            break
        # a space at position `limit` (0-based) still yields a full-length
        # left chunk, so the search window is limit + 1 characters wide;
        # a space at position 0 would make the left chunk empty, skip it
        cut = rest.rfind(" ", 1, limit + 1)
        if cut == -1:
            chunks.append(Chunk(source_id, index, rest[:limit], hard_cut=True))
            rest = rest[limit:]
        else:
            chunks.append(Chunk(source_id, index, rest[:cut]))
            rest = rest[cut + 1:]
        index += 1
    return chunks


def join_chunks(chunks: list[Chunk]) -> str:
    """Reassemble chunks into the original cleaned text."""
    parts: list[str] = []
    for i, chunk in enumerate(chunks):
        parts.append(chunk.text)
        if i < len(chunks) - 1 and not chunk.hard_cut:
            parts.append(" ")
    return "".join(parts)
