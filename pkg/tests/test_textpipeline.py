from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from topotext.constants import UNLABELED
from topotext.errors import ConfigError, CorpusDecodeError, CorpusError, EmptyInputError
from topotext.textpipeline import (
    Corpus,
    Document,
    load_corpus,
    parse_corpus,
    split_parts,
    take_parts,
    tfidf,
    tokenize,
)


def corpus_of(*texts: str, label: str = "A") -> Corpus:
    return Corpus(tuple(Document(f"d{i}", label, t) for i, t in enumerate(texts)))


class TestLoadCorpus:
    def test_with_labels(self, tmp_path: Path):
        (tmp_path / "poems.txt").write_text("first line\nsecond line\n", encoding="utf-8")
        (tmp_path / "poems.labels").write_text("A\nB\n", encoding="utf-8")

        corpus = load_corpus(tmp_path / "poems.txt", tmp_path / "poems.labels")

        assert len(corpus) == 2
        assert corpus.ids == ("poems-1", "poems-2")
        assert corpus.doc_labels == ("A", "B")
        assert corpus.labels == ("A", "B")

    def test_blank_lines_dropped(self, tmp_path: Path):
        (tmp_path / "c.txt").write_text("one\n\nthree\n", encoding="utf-8")

        corpus = load_corpus(tmp_path / "c.txt")

        assert corpus.texts == ("one", "three")
        assert corpus.ids == ("c-1", "c-3")
        assert corpus.dropped_count == 1

    def test_count_mismatch(self, tmp_path: Path):
        (tmp_path / "c.txt").write_text("a\nb\nc\n", encoding="utf-8")
        (tmp_path / "c.labels").write_text("A\nB\n", encoding="utf-8")

        with pytest.raises(CorpusError, match="3 text lines but 2 label lines"):
            load_corpus(tmp_path / "c.txt", tmp_path / "c.labels")

    def test_single_label_mode(self, tmp_path: Path):
        (tmp_path / "hafez.txt").write_text("a\nb\n", encoding="utf-8")

        corpus = load_corpus(tmp_path / "hafez.txt", label="Hafez")

        assert corpus.labels == ("Hafez",)

    def test_unlabeled(self):
        assert parse_corpus(b"a\n").labels == (UNLABELED,)

    def test_invalid_utf8(self):
        with pytest.raises(CorpusDecodeError) as exc_info:
            parse_corpus(b"fine\n\xff\xfe broken\n", name="bad")

        assert exc_info.value.line == 2
        assert "bad: line 2" in str(exc_info.value)

    def test_byte_order_mark(self):
        corpus = parse_corpus(b"\xef\xbb\xbf" + "سلام\n".encode("utf-8"))

        assert corpus.texts == ("سلام",)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(OSError):
            load_corpus(tmp_path / "absent.txt")


class TestCorpus:
    def test_duplicate_ids(self):
        doc = Document("x", "A", "text")

        with pytest.raises(CorpusError):
            Corpus((doc, doc))

    def test_undeclared_label(self):
        with pytest.raises(CorpusError):
            Corpus((Document("x", "C", "text"),), ("A", "B"))

    def test_concat(self):
        a = parse_corpus(b"one\n", name="a", label="A")
        b = parse_corpus(b"two\n\n", name="b", label="B")

        joined = a.concat(b)

        assert joined.ids == ("a-1", "b-1")
        assert joined.labels == ("A", "B")
        assert joined.dropped_count == 1


class TestTokenize:
    def test_punctuation(self):
        assert tokenize("Love, love!") == ["love", "love"]

    def test_empty(self):
        assert tokenize("") == []

    def test_zero_width_non_joiner_is_in_word(self):
        assert tokenize("ab\u200ccd ef") == ["ab\u200ccd", "ef"]

    def test_zero_width_non_joiner_at_edges(self):
        assert tokenize("\u200cab\u200c") == ["ab"]

    def test_persian(self):
        assert tokenize("می\u200cخواهم، دل!") == ["می\u200cخواهم", "دل"]

    def test_canonical_composition(self):
        assert tokenize("Cafe\u0301") == ["caf\u00e9"]

    def test_digits(self):
        assert tokenize("Part 2: x1") == ["part", "2", "x1"]


class TestTfidf:
    def test_two_documents(self):
        dtm = tfidf(corpus_of("a b", "a c"))

        assert dtm.vocab == ("a", "b", "c")
        row = dtm.row(0)
        assert row["a"] == pytest.approx(0.57974, abs=1e-4)
        assert row["b"] == pytest.approx(0.81480, abs=1e-4)
        assert "c" not in row

    def test_idf_formula(self):
        dtm = tfidf(corpus_of("a b", "a c"))
        idf_b = math.log(3 / 2) + 1

        assert dtm.row(0)["b"] / dtm.row(0)["a"] == pytest.approx(idf_b, abs=1e-12)

    def test_term_in_every_document(self):
        dtm = tfidf(corpus_of("a", "a a"))

        assert dtm.row(0) == pytest.approx({"a": 1.0})
        assert dtm.row(1) == pytest.approx({"a": 1.0})

    def test_document_without_terms(self):
        dtm = tfidf(corpus_of("a b", "!!!"))

        assert dtm.row(1) == {}
        assert dtm.empty_rows().tolist() == [1]
        assert dtm.without_empty_rows().doc_ids == ("d0",)

    def test_rows_have_unit_norm(self):
        dtm = tfidf(corpus_of("the cat sat", "the dog", "a cat and a dog", "sat"))

        norms = np.sqrt(np.asarray(dtm.matrix.multiply(dtm.matrix).sum(axis=1)).ravel())

        assert np.allclose(norms, 1.0, atol=1e-12)

    def test_vocabulary_is_union_of_tokens(self):
        texts = ("The cat, the hat.", "A dog\u200chouse", "hat 3")
        dtm = tfidf(corpus_of(*texts))

        assert set(dtm.vocab) == {term for text in texts for term in tokenize(text)}
        assert list(dtm.vocab) == sorted(dtm.vocab)

    def test_weights_zero_iff_absent(self):
        texts = ("x y", "y z z", "w")
        dtm = tfidf(corpus_of(*texts))
        dense = dtm.matrix.toarray()

        for i, text in enumerate(texts):
            terms = set(tokenize(text))
            for j, term in enumerate(dtm.vocab):
                assert (dense[i, j] > 0) == (term in terms)

    def test_stop_words(self):
        dtm = tfidf(corpus_of("the cat", "the dog"), stop_words=["the"])

        assert dtm.vocab == ("cat", "dog")

    def test_deterministic(self):
        corpus = corpus_of("a b c", "b c d", "c d e")

        first, second = tfidf(corpus), tfidf(corpus)

        assert (first.matrix != second.matrix).nnz == 0

    def test_empty_corpus(self):
        with pytest.raises(EmptyInputError):
            tfidf(Corpus(()))

    def test_no_terms(self):
        with pytest.raises(EmptyInputError):
            tfidf(corpus_of("...", "!?"))


class TestSplitParts:
    def test_even_split(self):
        corpus = corpus_of(*(f"doc {i}" for i in range(8000)))

        parts = split_parts(corpus, 1000)

        assert [len(p) for p in parts] == [1000] * 8
        assert not any(p.partial for p in parts)

    def test_short_last_part(self):
        parts = split_parts(corpus_of("a", "b", "c", "d", "e"), 2)

        assert [len(p) for p in parts] == [2, 2, 1]
        assert [p.partial for p in parts] == [False, False, True]
        assert parts[2].ids == ("d4",)

    def test_part_size_beyond_corpus(self):
        parts = split_parts(corpus_of("a", "b"), 10)

        assert len(parts) == 1

    def test_invalid_part_size(self):
        with pytest.raises(ConfigError):
            split_parts(corpus_of("a"), 0)

    def test_take_parts(self):
        parts = take_parts(corpus_of(*"abcdefg"), 2, 3)

        assert [p.ids for p in parts] == [("d0", "d1", "d2"), ("d3", "d4", "d5")]
