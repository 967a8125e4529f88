import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facts.ingest import (
    Chunk,
    ExtractionFailed,
    UnsupportedInput,
    chunk_text,
    clean_text,
    extract_text,
    join_chunks,
)


class TestExtractText:
    def test_txt_passthrough(self, tmp_path):
        doc = tmp_path / "a.txt"
        doc.write_text("hello", encoding="utf-8")
        assert extract_text(doc) == "hello"

    def test_extractor_substitution(self, tmp_path):
        doc = tmp_path / "a.pdf"
        doc.write_bytes(b"%PDF")
        extractor = f'{sys.executable} -c "print(\'page one page two\')" {{input}}'
        assert extract_text(doc, extractor) == "page one page two\n"

    def test_extractor_receives_path(self, tmp_path):
        doc = tmp_path / "a.pdf"
        doc.write_bytes(b"%PDF")
        extractor = (
            f'{sys.executable} -c "import sys; print(sys.argv[1])" {{input}}'
        )
        assert extract_text(doc, extractor).strip() == str(doc)

    def test_extractor_failure(self, tmp_path):
        doc = tmp_path / "a.pdf"
        doc.write_bytes(b"%PDF")
        extractor = f'{sys.executable} -c "import sys; sys.exit(3)" {{input}}'
        with pytest.raises(ExtractionFailed) as err:
            extract_text(doc, extractor)
        assert err.value.exit_status == 3

    def test_extractor_empty_output(self, tmp_path):
        doc = tmp_path / "a.pdf"
        doc.write_bytes(b"%PDF")
        extractor = f'{sys.executable} -c "pass" {{input}}'
        with pytest.raises(ExtractionFailed):
            extract_text(doc, extractor)

    def test_no_extractor_configured(self, tmp_path):
        doc = tmp_path / "a.pdf"
        doc.write_bytes(b"%PDF")
        with pytest.raises(UnsupportedInput):
            extract_text(doc)

    def test_template_without_placeholder(self, tmp_path):
        doc = tmp_path / "a.pdf"
        doc.write_bytes(b"%PDF")
        with pytest.raises(ValueError):
            extract_text(doc, "cat")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            extract_text(tmp_path / "nope.txt")


class TestCleanedDocument:
    def test_accepts_clean_text_output(self):
        from facts.ingest import CleanedDocument

        doc = CleanedDocument("s1", clean_text("a\nb  c\n 3 \n"))
        assert doc.text == "a b c"
        assert doc.char_count == 5

    def test_rejects_raw_text(self):
        from facts.ingest import CleanedDocument

        with pytest.raises(ValueError):
            CleanedDocument("s1", "line\nbreak")
        with pytest.raises(ValueError):
            CleanedDocument("s1", "double  space")

    def test_char_count_is_characters_not_bytes(self):
        from facts.ingest import CleanedDocument

        assert CleanedDocument("s1", "fördert").char_count == 7


class TestCleanText:
    def test_newline_becomes_space(self):
        assert clean_text("Learning\nmedia") == "Learning media"

    def test_page_number_line_dropped(self):
        assert clean_text("text\n 17 \nmore   words") == "text more words"

    def test_hyphenated_break_joined(self):
        assert clean_text("Lern-\numgebung") == "Lernumgebung"

    def test_hyphen_before_uppercase_kept(self):
        # proper-noun compounds like "KI-\nSysteme" keep their hyphen
        assert clean_text("KI-\nSysteme") == "KI- Systeme"

    def test_hyphen_join_can_be_disabled(self):
        assert clean_text("Lern-\numgebung", join_hyphenation=False) == "Lern- umgebung"

    def test_carriage_returns_treated_as_newlines(self):
        assert clean_text("a\r\nb\rc") == "a b c"

    def test_digits_inside_prose_survive(self):
        assert clean_text("page 17 of 20") == "page 17 of 20"

    def test_trims_and_collapses(self):
        assert clean_text("  a   b  ") == "a b"

    @settings(max_examples=300)
    @given(st.text(alphabet=st.characters(codec="utf-8"), max_size=300))
    def test_idempotent(self, raw):
        once = clean_text(raw)
        assert clean_text(once) == once


def chunk_sizes(chunks):
    return [c.char_count for c in chunks]


class TestChunkText:
    def test_hard_cut_arithmetic(self):
        text = "x" * 7000
        chunks = chunk_text(text, 3500)
        assert chunk_sizes(chunks) == [3500, 3500]
        assert chunks[0].hard_cut and not chunks[1].hard_cut

    def test_exact_limit_single_chunk(self):
        chunks = chunk_text("y" * 3500, 3500)
        assert len(chunks) == 1 and chunks[0].index == 0

    def test_empty_input(self):
        assert chunk_text("") == []

    def test_zero_limit_rejected(self):
        with pytest.raises(ValueError):
            chunk_text("abc", 0)

    def test_split_on_space(self):
        chunks = chunk_text("abc def", 3)
        assert [c.text for c in chunks] == ["abc", "def"]
        assert join_chunks(chunks) == "abc def"

    def test_space_beyond_window_hard_cuts(self):
        chunks = chunk_text("abcd ef", 3)
        assert [c.text for c in chunks] == ["abc", "d", "ef"]
        assert join_chunks(chunks) == "abcd ef"

    def test_indices_and_source_id(self):
        chunks = chunk_text("aa bb cc", 2, source_id="s")
        assert [c.index for c in chunks] == [0, 1, 2]
        assert all(c.source_id == "s" for c in chunks)

    @settings(max_examples=300)
    @given(
        raw=st.text(
            alphabet=st.characters(codec="utf-8"),
            max_size=400,
        ),
        limit=st.integers(min_value=1, max_value=10000),
    )
    def test_partition_property(self, raw, limit):
        cleaned = clean_text(raw)
        chunks = chunk_text(cleaned, limit)
        assert join_chunks(chunks) == cleaned
        assert all(c.char_count <= limit for c in chunks)
        assert all(c.char_count > 0 for c in chunks)
        assert [c.index for c in chunks] == list(range(len(chunks)))

    def test_unicode_characters_counted_not_bytes(self):
        text = "ä" * 10
        chunks = chunk_text(text, 5)
        assert chunk_sizes(chunks) == [5, 5]
        assert join_chunks(chunks) == text
