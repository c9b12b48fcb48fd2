from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np
from scipy import sparse
from sklearn.feature_extraction.text import TfidfVectorizer

from topotext.constants import UNLABELED, ZWNJ
from topotext.errors import ConfigError, CorpusDecodeError, CorpusError, EmptyInputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Document:
    id: str
    label: str
    text: str


@dataclass(frozen=True)
class Corpus:
    """
    Documents in file order, each carrying one of a declared set of labels.

    `dropped_count` records blank lines skipped while loading; `partial` marks
    the short trailing part produced by
    [split_parts][topotext.textpipeline.split_parts].
    """

    docs: tuple[Document, ...]
    labels: tuple[str, ...] = ()
    dropped_count: int = 0
    partial: bool = False

    def __post_init__(self) -> None:
        ids = [doc.id for doc in self.docs]
        if len(set(ids)) != len(ids):
            raise CorpusError("document ids must be unique")
        if not self.labels:
            seen = dict.fromkeys(doc.label for doc in self.docs)
            object.__setattr__(self, "labels", tuple(seen))
        undeclared = {doc.label for doc in self.docs} - set(self.labels)
        if undeclared:
            raise CorpusError(f"labels {sorted(undeclared)} are not declared")

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.docs)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(doc.id for doc in self.docs)

    @property
    def doc_labels(self) -> tuple[str, ...]:
        return tuple(doc.label for doc in self.docs)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(doc.text for doc in self.docs)

    def concat(self, *others: Corpus) -> Corpus:
        """Join corpora in order, e.g. two single-label books into one labelled corpus."""
        docs = list(self.docs)
        labels = dict.fromkeys(self.labels)
        dropped = self.dropped_count
        for other in others:
            docs.extend(other.docs)
            labels.update(dict.fromkeys(other.labels))
            dropped += other.dropped_count
        return Corpus(tuple(docs), tuple(labels), dropped)


def _decode_lines(data: bytes, source: str) -> list[str]:
    lines = []
    for number, raw in enumerate(data.splitlines(), start=1):
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError:
            raise CorpusDecodeError(source, number) from None
    return lines


def parse_corpus(
    data: bytes,
    label_data: Optional[bytes] = None,
    *,
    name: str = "doc",
    label: Optional[str] = None,
) -> Corpus:
    """
    Parse a one-document-per-line UTF-8 corpus and its optional label lines.

    Args:
        data: the corpus bytes.
        label_data: one label per line, aligned with `data`.
        name: prefix of the document ids, which are `<name>-<line number>`.
        label: label every document with this value when `label_data` is absent.
    Returns:
        [Corpus][topotext.textpipeline.Corpus]
    Raises:
        CorpusDecodeError: if a line is not valid UTF-8.
        CorpusError: if the text and label line counts differ.
    """
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    lines = _decode_lines(data, name)
    if label_data is not None:
        labels = [value.strip() for value in _decode_lines(label_data, f"{name} labels")]
        if len(labels) != len(lines):
            raise CorpusError(
                f"{name}: {len(lines)} text lines but {len(labels)} label lines"
            )
    else:
        labels = [label or UNLABELED] * len(lines)

    docs = []
    dropped = 0
    for number, (text, doc_label) in enumerate(zip(lines, labels), start=1):
        if not text.strip():
            dropped += 1
            continue
        docs.append(Document(f"{name}-{number}", doc_label, text.strip()))
    logger.debug(
        "parsed corpus %s: %d documents, %d blank lines", name, len(docs), dropped
    )
    return Corpus(tuple(docs), (), dropped)


def load_corpus(
    path: PathLike, label_path: Optional[PathLike] = None, *, label: Optional[str] = None
) -> Corpus:
    """
    Load a corpus file, one document per line, with an optional label file.

    Args:
        path: UTF-8 text file.
        label_path: file with one label per line; same line count as `path`.
        label: single-label mode, used when `label_path` is not given.
    Returns:
        [Corpus][topotext.textpipeline.Corpus]
    Raises:
        CorpusDecodeError: if a line is not valid UTF-8.
        CorpusError: if the text and label line counts differ.
        OSError: if a file cannot be read.
    """
    path = Path(path)
    label_data = Path(label_path).read_bytes() if label_path is not None else None
    return parse_corpus(path.read_bytes(), label_data, name=path.stem, label=label)


def _in_word(char: str) -> bool:
    return char.isalnum() or char == ZWNJ or unicodedata.category(char).startswith("M")


def tokenize(text: str) -> list[str]:
    """
    Split text into lowercase terms.

    Text is NFC-normalized; letters, digits, combining marks and the
    zero-width non-joiner form words, everything else separates them.
    """
    terms = []
    current: list[str] = []
    for char in unicodedata.normalize("NFC", text) + " ":
        if _in_word(char):
            current.append(char)
            continue
        if current:
            term = "".join(current).strip(ZWNJ)
            if term:
                terms.append(term.lower())
            current = []
    return terms


@dataclass(frozen=True, eq=False)
class DocumentTermMatrix:
    """
    TF-IDF weights, one L2-normalized sparse row per document.

    `vocab` is sorted; column `j` of `matrix` holds the weights of `vocab[j]`.
    """

    vocab: tuple[str, ...]
    matrix: sparse.csr_matrix
    doc_ids: tuple[str, ...]
    labels: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def row(self, index: int) -> dict[str, float]:
        """The nonzero weights of document `index`, by term."""
        start, end = self.matrix.indptr[index], self.matrix.indptr[index + 1]
        return {
            self.vocab[j]: float(w)
            for j, w in zip(self.matrix.indices[start:end], self.matrix.data[start:end])
        }

    def doc_index(self) -> dict[str, int]:
        return {doc_id: i for i, doc_id in enumerate(self.doc_ids)}

    def empty_rows(self) -> np.ndarray:
        return np.flatnonzero(np.diff(self.matrix.indptr) == 0)

    def without_empty_rows(self) -> DocumentTermMatrix:
        """The same matrix minus documents that have no terms."""
        keep = np.flatnonzero(np.diff(self.matrix.indptr) > 0)
        if keep.size == len(self.doc_ids):
            return self
        return DocumentTermMatrix(
            self.vocab,
            self.matrix[keep],
            tuple(self.doc_ids[i] for i in keep),
            tuple(self.labels[i] for i in keep),
        )


def tfidf(
    corpus: Corpus, stop_words: Optional[Iterable[str]] = None
) -> DocumentTermMatrix:
    """
    Build the TF-IDF document-term matrix of a corpus.

    tf is the raw count, idf(t) = ln((1 + N) / (1 + df(t))) + 1, and rows are
    L2-normalized; a document without terms stays a zero row.

    Args:
        corpus: a nonempty corpus.
        stop_words: terms to leave out of the vocabulary.
    Returns:
        [DocumentTermMatrix][topotext.textpipeline.DocumentTermMatrix]
    Raises:
        EmptyInputError: if the corpus has no documents or no terms.
    """
    if len(corpus) == 0:
        raise EmptyInputError("cannot vectorise an empty corpus")
    stop = sorted(set(stop_words)) if stop_words else None
    vocab = {term for text in corpus.texts for term in tokenize(text)} - set(stop or ())
    if not vocab:
        raise EmptyInputError("corpus contains no terms")

    vectorizer = TfidfVectorizer(
        tokenizer=tokenize,
        lowercase=False,
        token_pattern=None,
        stop_words=stop,
        smooth_idf=True,
        sublinear_tf=False,
        norm="l2",
        dtype=np.float64,
    )
    matrix = sparse.csr_matrix(vectorizer.fit_transform(corpus.texts))
    matrix.sort_indices()
    dtm = DocumentTermMatrix(
        tuple(vectorizer.get_feature_names_out()),
        matrix,
        corpus.ids,
        corpus.doc_labels,
    )
    logger.debug("tf-idf matrix %dx%d, %d nonzeros", *dtm.shape, matrix.nnz)
    return dtm


def split_parts(corpus: Corpus, part_size: int) -> list[Corpus]:
    """
    Cut a corpus into consecutive parts of `part_size` documents.

    The final part may be shorter; it is kept with `partial=True`.

    Raises:
        ConfigError: if `part_size < 1`.
    """
    if part_size < 1:
        raise ConfigError(f"part_size must be at least 1, got {part_size}")
    parts = []
    for start in range(0, len(corpus), part_size):
        docs = corpus.docs[start : start + part_size]
        parts.append(
            Corpus(docs, corpus.labels, 0, partial=len(docs) < part_size)
        )
    return parts


def take_parts(corpus: Corpus, count: int, part_size: int) -> list[Corpus]:
    """The first `count` parts of [split_parts][topotext.textpipeline.split_parts]."""
    if count < 1:
        raise ConfigError(f"part count must be at least 1, got {count}")
    return split_parts(corpus, part_size)[:count]