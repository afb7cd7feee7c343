"""Chi-square filter feature selection.

Every term gets one score per class from its one-vs-rest 2x2 table of
document counts; the term's rank score is the maximum over classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .vectorize import TermDocMatrix


@dataclass(frozen=True)
class ContingencyTable:
    """Document counts for one (term, class) pair.

    a: in class, contains term      b: in class, lacks term
    c: other class, contains term   d: other class, lacks term
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("contingency counts must be nonnegative")
        if self.N <= 0:
            raise ValueError("contingency table is empty")

    @property
    def N(self) -> int:
        return self.a + self.b + self.c + self.d


def chi_score(t: ContingencyTable) -> float:
    """``N (ad - bc)^2 / ((a+c)(b+d)(a+b)(c+d))``; 0 when a marginal vanishes."""
    denom = (t.a + t.c) * (t.b + t.d) * (t.a + t.b) * (t.c + t.d)
    if denom == 0:
        return 0.0
    # integer numerator keeps the score exact up to the final division
    return t.N * (t.a * t.d - t.b * t.c) ** 2 / denom


def contingency(term: str | int, cls: str, matrix: TermDocMatrix) -> ContingencyTable:
    """One-vs-rest table for ``term`` against ``cls``, presence meaning count >= 1."""
    j = term if isinstance(term, int) else matrix.vocab.index.get(term)
    if j is None or not 0 <= j < matrix.dim:
        raise KeyError(f"unknown term {term!r}")
    if cls not in matrix.categories:
        raise KeyError(f"unknown class {cls!r}")
    a = b = c = d = 0
    for counts, label in zip(matrix.counts, matrix.labels):
        present = counts.get(j) >= 1
        if label == cls:
            a, b = (a + 1, b) if present else (a, b + 1)
        else:
            c, d = (c + 1, d) if present else (c, d + 1)
    return ContingencyTable(a, b, c, d)


@dataclass(frozen=True)
class ChiRanking:
    """Terms sorted by descending score, ties in lexicographic term order."""

    terms: tuple[str, ...]
    scores: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def top(self, k: int) -> tuple[str, ...]:
        return self.terms[:k]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        lines = ["rank,term,score"]
        lines += [f"{r},{t},{s:.6f}" for r, (t, s) in enumerate(zip(self.terms, self.scores), 1)]
        return "\n".join(lines) + "\n"


def class_scores(matrix: TermDocMatrix) -> np.ndarray:
    """Chi-square score of every (class, term) pair, shape ``(n_classes, dim)``.

    The integer tables are counted with numpy; each score then goes through
    :func:`chi_score`, so both paths agree bit for bit.
    """
    present = (matrix.C >= 1).astype(np.int64)
    y = matrix.y
    n = len(matrix)
    df = present.sum(axis=0)
    out = np.zeros((len(matrix.categories), matrix.dim))
    for k in range(len(matrix.categories)):
        in_class = y == k
        n_class = int(in_class.sum())
        a = present[in_class].sum(axis=0)
        b = n_class - a
        c = df - a
        d = (n - n_class) - c
        for j in range(matrix.dim):
            out[k, j] = chi_score(ContingencyTable(int(a[j]), int(b[j]), int(c[j]), int(d[j])))
    return out


def rank_terms(matrix: TermDocMatrix) -> ChiRanking:
    if len(matrix.categories) < 2:
        raise ValueError("chi-square ranking needs at least two classes")
    best = class_scores(matrix).max(axis=0)
    terms = matrix.vocab.terms
    order = sorted(range(matrix.dim), key=lambda j: (-best[j], terms[j]))
    return ChiRanking(tuple(terms[j] for j in order), tuple(float(best[j]) for j in order))


def select_top_k(matrix: TermDocMatrix, ranking: ChiRanking, k: int) -> TermDocMatrix:
    """Project ``matrix`` onto the ``k`` best-ranked terms.

    The new vocabulary is re-indexed in lexicographic order; weights are
    copied, not recomputed, so IDF stays the one fitted on the full vocabulary.
    """
    if not 1 <= k <= matrix.dim:
        raise ValueError(f"k must lie in [1, {matrix.dim}], got {k}")
    sub_vocab = matrix.vocab.subset(ranking.top(k))
    column_map = {matrix.vocab.index[t]: i for i, t in enumerate(sub_vocab.terms)}
    return TermDocMatrix(
        tuple(v.project(column_map) for v in matrix.vectors),
        tuple(c.project(column_map) for c in matrix.counts),
        matrix.labels,
        sub_vocab,
        matrix.categories,
        matrix.doc_ids,
    )
