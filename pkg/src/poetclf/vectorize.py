"""Bag-of-words vocabulary and TF-IDF document vectors.

A term's weight in a document is its raw count times ``ln(N / df)``, where
``N`` is the number of training documents and ``df`` the number of training
documents containing the term.  Rows are not length-normalised.
"""

from __future__ import annotations

import csv
import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class SparseVector:
    """Sorted ``(column, weight)`` pairs; zero weights are never stored."""

    indices: tuple[int, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values differ in length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("column ids must be strictly increasing")
        if any(v == 0 for v in self.values):
            raise ValueError("zero weights must not be stored")

    @classmethod
    def from_dict(cls, weights: Mapping[int, float]) -> "SparseVector":
        items = sorted((i, float(v)) for i, v in weights.items() if v != 0)
        return cls(tuple(i for i, _ in items), tuple(v for _, v in items))

    def items(self):
        return zip(self.indices, self.values)

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.indices, self.values))

    def __len__(self) -> int:
        return len(self.indices)

    def get(self, col: int, default: float = 0.0) -> float:
        for i, v in zip(self.indices, self.values):
            if i == col:
                return v
        return default

    def to_dense(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        if self.indices:
            if self.indices[-1] >= dim:
                raise ValueError(f"column {self.indices[-1]} out of range for dimension {dim}")
            out[list(self.indices)] = self.values
        return out

    def project(self, column_map: Mapping[int, int]) -> "SparseVector":
        """Keep columns present in ``column_map`` and renumber them."""
        return SparseVector.from_dict(
            {column_map[i]: v for i, v in self.items() if i in column_map}
        )


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    n_docs: int
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.terms) != len(self.doc_freq):
            raise ValueError("terms and doc_freq differ in length")
        index = {t: i for i, t in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise ValueError("duplicate terms in vocabulary")
        for t, df in zip(self.terms, self.doc_freq):
            if not 1 <= df <= self.n_docs:
                raise ValueError(f"doc_freq of {t!r} is {df}, outside [1, {self.n_docs}]")
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def df(self, term: str) -> int:
        return self.doc_freq[self.index[term]]

    @cached_property
    def idf_values(self) -> tuple[float, ...]:
        return tuple(idf(self.n_docs, df) for df in self.doc_freq)

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.n_docs).encode())
        for t, df in zip(self.terms, self.doc_freq):
            h.update(f"\n{t}\t{df}".encode())
        return h.hexdigest()

    def subset(self, terms: Iterable[str]) -> "Vocabulary":
        chosen = sorted(set(terms))
        return Vocabulary(tuple(chosen), tuple(self.df(t) for t in chosen), self.n_docs)

    def to_json(self) -> dict:
        return {"terms": list(self.terms), "doc_freq": list(self.doc_freq), "n_docs": self.n_docs}

    @classmethod
    def from_json(cls, data: Mapping) -> "Vocabulary":
        return cls(tuple(data["terms"]), tuple(int(x) for x in data["doc_freq"]), int(data["n_docs"]))

    def write_tsv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for t, df in zip(self.terms, self.doc_freq):
                fh.write(f"{t}\t{df}\n")


def build_vocabulary(train_streams: Sequence[Sequence[str]]) -> Vocabulary:
    """Collect every distinct training term; ``doc_freq`` counts documents, not tokens."""
    if not train_streams:
        raise ValueError("need at least one training document")
    df: Counter[str] = Counter()
    for tokens in train_streams:
        df.update(set(tokens))
    if not df:
        raise ValueError("training documents contain no terms; vocabulary would be empty")
    terms = tuple(sorted(df))
    return Vocabulary(terms, tuple(df[t] for t in terms), len(train_streams))


def idf(n_docs: int, doc_freq: int) -> float:
    """Natural-log inverse document frequency, ``ln(n_docs / doc_freq)``."""
    if doc_freq <= 0:
        raise ValueError("doc_freq must be positive")
    if doc_freq > n_docs:
        raise ValueError(f"doc_freq {doc_freq} exceeds n_docs {n_docs}")
    return math.log(n_docs / doc_freq)


def term_counts(tokens: Iterable[str], vocab: Vocabulary) -> SparseVector:
    """Raw in-vocabulary term counts; out-of-vocabulary tokens are dropped."""
    counts: Counter[int] = Counter()
    index = vocab.index
    for t in tokens:
        j = index.get(t)
        if j is not None:
            counts[j] += 1
    return SparseVector.from_dict(counts)


def tfidf_from_counts(counts: SparseVector, vocab: Vocabulary) -> SparseVector:
    w = vocab.idf_values
    return SparseVector.from_dict({j: tf * w[j] for j, tf in counts.items()})


def vectorize(tokens: Iterable[str], vocab: Vocabulary, n_train: int | None = None) -> SparseVector:
    """TF-IDF vector of one token stream against ``vocab``.

    ``n_train`` defaults to the vocabulary's own document count; terms that
    occur in every training document get weight 0 and are not stored.
    """
    if not len(vocab):
        raise ValueError("empty vocabulary")
    counts = term_counts(tokens, vocab)
    if n_train is None or n_train == vocab.n_docs:
        return tfidf_from_counts(counts, vocab)
    return SparseVector.from_dict(
        {j: tf * idf(n_train, vocab.doc_freq[j]) for j, tf in counts.items()}
    )


@dataclass(frozen=True)
class TermDocMatrix:
    """Documents as parallel TF-IDF rows and raw count rows.

    Count rows are kept because presence tests (chi-square contingency) and
    multinomial Naive Bayes work on counts, and a term present in every
    training document has zero TF-IDF weight but is still present.
    """

    vectors: tuple[SparseVector, ...]
    counts: tuple[SparseVector, ...]
    labels: tuple[str, ...]
    vocab: Vocabulary
    categories: tuple[str, ...]
    doc_ids: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.vectors)
        if len(self.counts) != n or len(self.labels) != n:
            raise ValueError("rows, counts and labels differ in length")
        if self.doc_ids and len(self.doc_ids) != n:
            raise ValueError("doc_ids length mismatch")
        dim = len(self.vocab)
        for row in self.vectors + self.counts:
            if row.indices and row.indices[-1] >= dim:
                raise ValueError("column id beyond vocabulary size")
        unknown = set(self.labels) - set(self.categories)
        if unknown:
            raise ValueError(f"labels not among categories: {sorted(unknown)}")

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def n_train(self) -> int:
        return self.vocab.n_docs

    @property
    def dim(self) -> int:
        return len(self.vocab)

    @cached_property
    def X(self) -> np.ndarray:
        """Dense TF-IDF matrix, shape ``(n_docs, dim)``."""
        return _dense(self.vectors, self.dim)

    @cached_property
    def C(self) -> np.ndarray:
        """Dense raw-count matrix."""
        return _dense(self.counts, self.dim)

    @cached_property
    def y(self) -> np.ndarray:
        """Labels as indices into ``categories``."""
        pos = {c: i for i, c in enumerate(self.categories)}
        return np.array([pos[l] for l in self.labels], dtype=np.intp)

    def write_csv(self, path: str | Path) -> None:
        ids = self.doc_ids or tuple(str(i) for i in range(len(self)))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["doc_id", "label", "term:weight"])
            for doc_id, label, vec in zip(ids, self.labels, self.vectors):
                cells = ";".join(f"{self.vocab.terms[j]}:{v:.6f}" for j, v in vec.items())
                w.writerow([doc_id, label, cells])


def _dense(rows: Sequence[SparseVector], dim: int) -> np.ndarray:
    out = np.zeros((len(rows), dim))
    for r, vec in enumerate(rows):
        if vec.indices:
            out[r, list(vec.indices)] = vec.values
    return out


def build_matrix(
    streams: Sequence[Sequence[str]],
    labels: Sequence[str],
    categories: Sequence[str] | None = None,
    doc_ids: Sequence[str] = (),
    vocab: Vocabulary | None = None,
) -> TermDocMatrix:
    """Vectorize ``streams``; builds the vocabulary from them unless one is given."""
    if vocab is None:
        vocab = build_vocabulary(streams)
    counts = tuple(term_counts(s, vocab) for s in streams)
    vectors = tuple(tfidf_from_counts(c, vocab) for c in counts)
    cats = tuple(categories) if categories is not None else tuple(sorted(set(labels)))
    return TermDocMatrix(vectors, counts, tuple(labels), vocab, cats, tuple(doc_ids))
