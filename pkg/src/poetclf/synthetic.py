"""Synthetic poem corpora with a known signal.

Each class owns a set of planted stems that never occur in other classes;
all classes draw the bulk of their words from one shared pool of noise
stems.  Every generated word is a fixed point of the Porter stemmer and not
a stopword, so the planted stems survive preprocessing unchanged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .porter import porter_stem
from .preprocess import StopwordList

_ONSETS = "b c d f g h k l m n p r s t v z".split() + ["br", "dr", "gl", "pl", "tr", "sk"]
_VOWELS = ["a", "o", "u", "i"]
_CODAS = ["b", "d", "g", "k", "m", "n", "p", "r", "t", "v", "z"]
_FILLER = ["the", "and", "of", "with", "into", "upon", "my", "your"]


@dataclass(frozen=True)
class SyntheticCorpus:
    planted: dict[str, tuple[str, ...]]
    noise: tuple[str, ...]
    documents: dict[str, list[str]]  # class -> poem texts


def _pseudo_words(rng: random.Random, count: int, taken: set[str], stops: StopwordList) -> list[str]:
    out: list[str] = []
    while len(out) < count:
        syll = rng.choice((2, 2, 3))
        w = "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(syll)) + rng.choice(_CODAS)
        if w in taken or w in stops or porter_stem(w) != w:
            continue
        taken.add(w)
        out.append(w)
    return out


def generate(
    n_classes: int = 3,
    docs_per_class: int = 100,
    planted_per_class: int = 20,
    n_noise: int = 500,
    planted_tokens: int = 16,
    noise_tokens: int = 40,
    skew: float = 1.0,
    seed: int = 42,
) -> SyntheticCorpus:
    """Build poems as lines of mixed planted, noise and filler words.

    Each poem gets ``planted_tokens`` draws from its class's planted stems
    and ``noise_tokens`` draws from the shared pool, both with replacement.
    Planted stem ``r`` (0-based) is drawn with weight ``(r + 1) ** -skew``,
    so a positive ``skew`` gives each class a few signature words.
    """
    rng = random.Random(seed)
    stops = StopwordList.builtin()
    taken: set[str] = set()
    classes = [f"poet_{chr(ord('a') + i)}" for i in range(n_classes)]
    planted = {c: tuple(_pseudo_words(rng, planted_per_class, taken, stops)) for c in classes}
    noise = tuple(_pseudo_words(rng, n_noise, taken, stops))

    weights = [(r + 1) ** -skew for r in range(planted_per_class)]
    documents: dict[str, list[str]] = {}
    for c in classes:
        poems = []
        for _ in range(docs_per_class):
            words = rng.choices(planted[c], weights, k=planted_tokens)
            words += [rng.choice(noise) for _ in range(noise_tokens)]
            words += [rng.choice(_FILLER) for _ in range(noise_tokens // 4)]
            rng.shuffle(words)
            lines = [" ".join(words[i:i + 7]) for i in range(0, len(words), 7)]
            poems.append("\n".join(line.capitalize() + rng.choice([",", ".", ";", "!"]) for line in lines) + "\n")
        documents[c] = poems
    return SyntheticCorpus(planted, noise, documents)


def write_corpus(corpus: SyntheticCorpus, root: str | Path) -> Path:
    """Write ``corpus`` as ``<class>/<nnn>.txt`` files under ``root``."""
    root = Path(root)
    for c, poems in corpus.documents.items():
        d = root / c
        d.mkdir(parents=True, exist_ok=True)
        for i, text in enumerate(poems):
            (d / f"{i:03d}.txt").write_text(text, encoding="utf-8", newline="\n")
    return root
