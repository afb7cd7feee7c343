"""Text normalisation: lowercase, strip non-letters, tokenize, drop stopwords, stem."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .porter import porter_stem

__all__ = [
    "StopwordList",
    "normalize_and_tokenize",
    "remove_stopwords",
    "porter_stem",
    "preprocess_text",
    "preprocess_document",
]

_NON_LETTER = re.compile(r"[^A-Za-z\s]")


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]
    source: str = "builtin"

    def __post_init__(self):
        bad = [w for w in self.words if w != w.lower() or not w]
        if bad:
            raise ValueError(f"stopwords must be non-empty lowercase strings: {sorted(bad)[:5]}")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def of(cls, words: Iterable[str]) -> "StopwordList":
        return cls(frozenset(words), "inline")

    @classmethod
    def empty(cls) -> "StopwordList":
        return cls(frozenset(), "inline")

    @classmethod
    def builtin(cls) -> "StopwordList":
        text = resources.files("poetclf").joinpath("data/stopwords_en.txt").read_text("utf-8")
        return cls(frozenset(_parse_lines(text)), "builtin")

    @classmethod
    def from_file(cls, path: str | Path) -> "StopwordList":
        """One word per line; blank lines and ``#`` comments are skipped."""
        text = Path(path).read_text(encoding="utf-8")
        return cls(frozenset(w.lower() for w in _parse_lines(text)), str(path))


def _parse_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def normalize_and_tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and split it into ``[a-z]+`` tokens.

    Anything that is not an ASCII letter or whitespace (punctuation, digits,
    accented letters) becomes a space, so deletions never fuse neighbours.
    """
    return _NON_LETTER.sub(" ", text).lower().split()


def remove_stopwords(tokens: Iterable[str], stops: StopwordList | Iterable[str]) -> list[str]:
    return [t for t in tokens if t not in stops]


def preprocess_text(text: str, stops: StopwordList) -> list[str]:
    # stopwords are surface forms, so they are filtered before stemming
    return [porter_stem(t) for t in remove_stopwords(normalize_and_tokenize(text), stops)]


def preprocess_document(doc, stops: StopwordList) -> list[str]:
    return preprocess_text(doc.text, stops)
