"""Loading labelled poems from disk and splitting them into train/test."""

from __future__ import annotations

import enum
import math
import random
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass, field, replace
from pathlib import Path


class CorpusError(Exception):
    """Raised for malformed corpora (bad files, missing categories, bad splits)."""


class Split(str, enum.Enum):
    TRAIN = "train"
    TEST = "test"
    UNASSIGNED = "unassigned"


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: str
    split: Split = Split.UNASSIGNED


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    categories: tuple[str, ...] = field(default=())

    def __post_init__(self):
        labels = sorted({d.label for d in self.documents})
        if not self.categories:
            object.__setattr__(self, "categories", tuple(labels))
        elif sorted(self.categories) != labels:
            raise CorpusError(f"categories {self.categories} do not match labels {labels}")
        ids = Counter(d.id for d in self.documents)
        dup = [i for i, n in ids.items() if n > 1]
        if dup:
            raise CorpusError(f"duplicate document ids: {dup[:3]}")

    def __len__(self) -> int:
        return len(self.documents)

    def subset(self, split: Split) -> list[Document]:
        return [d for d in self.documents if d.split == split]

    @property
    def train(self) -> list[Document]:
        return self.subset(Split.TRAIN)

    @property
    def test(self) -> list[Document]:
        return self.subset(Split.TEST)

    @property
    def is_split(self) -> bool:
        return any(d.split != Split.UNASSIGNED for d in self.documents)

    def counts(self) -> dict[str, dict[str, int]]:
        """Per-category document counts keyed by split name."""
        out = {c: {s.value: 0 for s in Split} for c in self.categories}
        for d in self.documents:
            out[d.label][d.split.value] += 1
        return out


def _read_doc(path: Path, root: Path, label: str, split: Split) -> Document:
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    if not text.strip():
        raise CorpusError(f"{path}: empty document")
    return Document(path.relative_to(root).as_posix(), text, label, split)


def _category_dirs(parent: Path) -> list[Path]:
    return sorted((p for p in parent.iterdir() if p.is_dir()), key=lambda p: p.name)


def _load_category(cat_dir: Path, root: Path, split: Split) -> list[Document]:
    files = sorted(cat_dir.glob("*.txt"), key=lambda p: p.name)
    if not files:
        raise CorpusError(f"category directory {cat_dir} contains no .txt files")
    return [_read_doc(f, root, cat_dir.name, split) for f in files]


def load_corpus(root: str | Path) -> Corpus:
    """Load a corpus from ``root``.

    Two layouts are recognised.  ``<category>/*.txt`` yields unassigned
    documents; ``train/<category>/*.txt`` plus ``test/<category>/*.txt``
    fixes the split from the directory names.  Documents are ordered by
    relative path so the result never depends on directory listing order.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root not found: {root}")

    subdirs = {p.name for p in _category_dirs(root)}
    docs: list[Document] = []
    if {"train", "test"} <= subdirs:
        for split in (Split.TRAIN, Split.TEST):
            for cat in _category_dirs(root / split.value):
                docs.extend(_load_category(cat, root, split))
    else:
        for cat in _category_dirs(root):
            docs.extend(_load_category(cat, root, Split.UNASSIGNED))
    if not docs:
        raise CorpusError(f"no documents under {root}")
    docs.sort(key=lambda d: d.id)
    corpus = Corpus(tuple(docs))
    if corpus.is_split:
        for cat, row in corpus.counts().items():
            if row["train"] == 0 or row["test"] == 0:
                raise CorpusError(f"category {cat!r} has no documents in one of train/test")
    return corpus


def train_count(n: int, fraction: float) -> int:
    """``round(fraction * n)`` with halves rounded up."""
    exact = Fraction(repr(fraction)) * n
    return math.floor(exact + Fraction(1, 2))


def stratified_split(corpus: Corpus, train_fraction: float = 0.6, seed: int = 42) -> Corpus:
    """Mark ``round(train_fraction * n_c)`` documents of every category as train.

    Each category is shuffled with its own RNG seeded from ``(seed, category)``,
    so adding a category never perturbs the others.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if corpus.is_split:
        raise CorpusError("corpus is already split")
    by_cat: dict[str, list[int]] = {c: [] for c in corpus.categories}
    for i, d in enumerate(corpus.documents):
        by_cat[d.label].append(i)

    splits: dict[int, Split] = {}
    for cat, idx in by_cat.items():
        if len(idx) < 2:
            raise CorpusError(f"category {cat!r} needs at least 2 documents to split")
        order = list(idx)
        random.Random(f"{seed}:{cat}").shuffle(order)
        n_train = train_count(len(order), train_fraction)
        # keep both sides non-empty
        n_train = min(max(n_train, 1), len(order) - 1)
        for rank, i in enumerate(order):
            splits[i] = Split.TRAIN if rank < n_train else Split.TEST

    docs = tuple(replace(d, split=splits[i]) for i, d in enumerate(corpus.documents))
    return Corpus(docs, corpus.categories)
