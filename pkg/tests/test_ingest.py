import pytest

from scriptmine.errors import (
    ConfigError,
    EmptyChapter,
    EncodingError,
    MissingFile,
    NoChaptersFound,
)
from scriptmine.ingest import (
    ChapterRule,
    load_cache,
    load_corpus,
    parse_manifest,
    save_cache,
    split_chapter_spans,
    split_chapters,
)

from .conftest import TOY_MANIFEST


class TestManifest:
    def test_toy_manifest(self):
        entries = parse_manifest(TOY_MANIFEST)
        assert [e.name for e in entries] == ["Meadow", "Forge", "Harbor"]
        assert entries[0].rule.kind == "regex"
        assert entries[2].rule.kind == "per_file"

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingFile):
            parse_manifest(tmp_path / "nope.txt")

    def test_missing_key(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("[book]\nname = X\npath = x.txt\n")
        with pytest.raises(ConfigError):
            parse_manifest(p)

    def test_duplicate_names(self, tmp_path):
        p = tmp_path / "m.txt"
        stanza = "[book]\nname = X\npath = x.txt\nchapter_rule = per_file\n"
        p.write_text(stanza * 2)
        with pytest.raises(ConfigError):
            parse_manifest(p)

    def test_bad_rule(self):
        with pytest.raises(ConfigError):
            ChapterRule.parse("regex:([unclosed")
        with pytest.raises(ConfigError):
            ChapterRule.parse("by_magic")


class TestSplitChapters:
    RULE = ChapterRule.parse(r"regex:^CHAPTER \d+$")

    def test_three_headers(self):
        text = "CHAPTER 1\nalpha beta\nCHAPTER 2\ngamma\nCHAPTER 3\ndelta\n"
        assert split_chapters(text, self.RULE) == ["alpha beta", "gamma", "delta"]

    def test_roundtrip_reconstruction(self):
        text = "front matter\nCHAPTER 1\n alpha \nCHAPTER 2\ngamma\n"
        prelude, parts = split_chapter_spans(text, r"^CHAPTER \d+$")
        rebuilt = prelude + "".join(h + b for h, b in parts)
        assert rebuilt == text

    def test_single_chapter_identity(self):
        assert split_chapters("  one chapter  ", ChapterRule.parse("per_file")) == ["one chapter"]

    def test_no_match(self):
        with pytest.raises(NoChaptersFound):
            split_chapters("no headers here", self.RULE)

    def test_empty_chapter_rejected(self):
        with pytest.raises(EmptyChapter):
            split_chapters("CHAPTER 1\n\nCHAPTER 2\nbody\n", self.RULE)

    def test_header_removed_from_body(self):
        chapters = split_chapters("CHAPTER 1\nbody text\n", self.RULE)
        assert chapters == ["body text"]


class TestLoadCorpus:
    def test_toy_counts(self, toy_corpus):
        assert toy_corpus.n == 12
        assert len(toy_corpus.books) == 3
        assert toy_corpus.book_sizes() == {0: 4, 1: 4, 2: 4}

    def test_single_book_single_chapter(self, tmp_path):
        (tmp_path / "b.txt").write_text("CHAPTER 1\nhello world\n")
        (tmp_path / "m.txt").write_text(
            "[book]\nname = B\npath = b.txt\nchapter_rule = regex:^CHAPTER \\d+$\n"
        )
        corpus = load_corpus(tmp_path, tmp_path / "m.txt")
        assert corpus.n == 1
        assert len(corpus.books) == 1
        assert corpus.documents[0].text == "hello world"

    def test_document_order_book_major(self, toy_corpus):
        labels = toy_corpus.labels()
        assert labels == sorted(labels)
        assert toy_corpus.n == sum(toy_corpus.book_sizes().values())

    def test_chapter_indices_one_based(self, toy_corpus):
        for book_id in (0, 1, 2):
            idxs = [c for b, c in toy_corpus.labels() if b == book_id]
            assert idxs == [1, 2, 3, 4]

    def test_missing_book_file(self, tmp_path):
        (tmp_path / "m.txt").write_text(
            "[book]\nname = B\npath = gone.txt\nchapter_rule = per_file\n"
        )
        with pytest.raises(MissingFile):
            load_corpus(tmp_path, tmp_path / "m.txt")

    def test_empty_book(self, tmp_path):
        from scriptmine.errors import EmptyBook

        (tmp_path / "empty").mkdir()
        (tmp_path / "m.txt").write_text(
            "[book]\nname = B\npath = empty\nchapter_rule = per_file\n"
        )
        with pytest.raises(EmptyBook):
            load_corpus(tmp_path, tmp_path / "m.txt")

    def test_non_utf8(self, tmp_path):
        (tmp_path / "b.txt").write_bytes(b"CHAPTER 1\n\xff\xfe broken\n")
        (tmp_path / "m.txt").write_text(
            "[book]\nname = B\npath = b.txt\nchapter_rule = regex:^CHAPTER \\d+$\n"
        )
        with pytest.raises(EncodingError):
            load_corpus(tmp_path, tmp_path / "m.txt")

    def test_deterministic(self, toy_corpus):
        again = load_corpus(TOY_MANIFEST.parent, TOY_MANIFEST)
        assert again == toy_corpus


class TestCache:
    def test_lossless_roundtrip(self, toy_corpus, tmp_path):
        path = tmp_path / "corpus.tsv"
        save_cache(toy_corpus, path)
        assert load_cache(path) == toy_corpus

    def test_roundtrip_with_awkward_text(self, tmp_path):
        from scriptmine.ingest import BookLabel, Corpus, RawDocument

        book = BookLabel(0, "Tabs\tand\\newlines")
        corpus = Corpus(
            (RawDocument(book, 1, "line one\nline\ttwo\\three\rfour"),), (book,)
        )
        path = tmp_path / "c.tsv"
        save_cache(corpus, path)
        assert load_cache(path) == corpus

    def test_serialization_deterministic(self, toy_corpus, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        save_cache(toy_corpus, a)
        save_cache(toy_corpus, b)
        assert a.read_bytes() == b.read_bytes()
