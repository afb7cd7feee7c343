"""Porter suffix-stripping stemmer.

Follows Martin Porter's reference (ANSI C) implementation, including its two
well-known departures from the 1980 description: step 2 maps ``-bli`` to
``-ble`` (instead of ``-abli`` to ``-able``) and adds ``-logi`` to ``-log``.
This is the variant the published ``voc.txt``/``output.txt`` vectors were
generated with.
"""

from functools import lru_cache

_VOWELS = frozenset("aeiou")

# (suffix, replacement) tables keyed by the penultimate letter of the word,
# mirroring the switch statements of the reference code.  Within a bucket the
# first suffix that matches ends the search whether or not it fires.
_STEP2 = {
    "a": (("ational", "ate"), ("tional", "tion")),
    "c": (("enci", "ence"), ("anci", "ance")),
    "e": (("izer", "ize"),),
    "l": (("bli", "ble"), ("alli", "al"), ("entli", "ent"), ("eli", "e"), ("ousli", "ous")),
    "o": (("ization", "ize"), ("ation", "ate"), ("ator", "ate")),
    "s": (("alism", "al"), ("iveness", "ive"), ("fulness", "ful"), ("ousness", "ous")),
    "t": (("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")),
    "g": (("logi", "log"),),
}

# keyed by the final letter
_STEP3 = {
    "e": (("icate", "ic"), ("ative", ""), ("alize", "al")),
    "i": (("iciti", "ic"),),
    "l": (("ical", "ic"), ("ful", "")),
    "s": (("ness", ""),),
}

# keyed by the penultimate letter
_STEP4 = {
    "a": ("al",),
    "c": ("ance", "ence"),
    "e": ("er",),
    "i": ("ic",),
    "l": ("able", "ible"),
    "n": ("ant", "ement", "ment", "ent"),
    "o": ("ion", "ou"),
    "s": ("ism",),
    "t": ("ate", "iti"),
    "u": ("ous",),
    "v": ("ive",),
    "z": ("ize",),
}


class _Word:
    """Mutable buffer with the consonant/measure predicates of the algorithm.

    ``b`` holds the current word; ``j`` marks the end of the stem left after
    removing the suffix most recently matched by :meth:`ends`.
    """

    __slots__ = ("b", "j")

    def __init__(self, word: str):
        self.b = word
        self.j = 0

    def cons(self, i: int) -> bool:
        ch = self.b[i]
        if ch in _VOWELS:
            return False
        if ch == "y":
            return i == 0 or not self.cons(i - 1)
        return True

    def m(self) -> int:
        """Count VC sequences in ``b[:j + 1]``."""
        n = 0
        prev_vowel = False
        for i in range(self.j + 1):
            c = self.cons(i)
            if c and prev_vowel:
                n += 1
            prev_vowel = not c
        return n

    def vowel_in_stem(self) -> bool:
        return any(not self.cons(i) for i in range(self.j + 1))

    def double_c(self, i: int) -> bool:
        return i >= 1 and self.b[i] == self.b[i - 1] and self.cons(i)

    def cvc(self, i: int) -> bool:
        if i < 2 or not self.cons(i) or self.cons(i - 1) or not self.cons(i - 2):
            return False
        return self.b[i] not in "wxy"

    def ends(self, suffix: str) -> bool:
        if not self.b.endswith(suffix):
            return False
        self.j = len(self.b) - len(suffix) - 1
        return True

    def set_to(self, s: str) -> None:
        self.b = self.b[: self.j + 1] + s

    def replace_if_measured(self, s: str) -> None:
        if self.m() > 0:
            self.set_to(s)


def _step1ab(w: _Word) -> None:
    if w.b.endswith("s"):
        if w.b.endswith("sses"):
            w.b = w.b[:-2]
        elif w.b.endswith("ies"):
            w.j = len(w.b) - 4
            w.set_to("i")
        elif len(w.b) >= 2 and w.b[-2] != "s":
            w.b = w.b[:-1]
    if w.ends("eed"):
        if w.m() > 0:
            w.b = w.b[:-1]
    elif (w.ends("ed") or w.ends("ing")) and w.vowel_in_stem():
        w.b = w.b[: w.j + 1]
        if w.ends("at"):
            w.set_to("ate")
        elif w.ends("bl"):
            w.set_to("ble")
        elif w.ends("iz"):
            w.set_to("ize")
        elif w.double_c(len(w.b) - 1):
            if w.b[-1] not in "lsz":
                w.b = w.b[:-1]
        else:
            w.j = len(w.b) - 1
            if w.m() == 1 and w.cvc(len(w.b) - 1):
                w.set_to("e")


def _step1c(w: _Word) -> None:
    if w.ends("y") and w.vowel_in_stem():
        w.b = w.b[:-1] + "i"


def _step2(w: _Word) -> None:
    for suffix, repl in _STEP2.get(w.b[-2], ()):
        if w.ends(suffix):
            w.replace_if_measured(repl)
            return


def _step3(w: _Word) -> None:
    for suffix, repl in _STEP3.get(w.b[-1], ()):
        if w.ends(suffix):
            w.replace_if_measured(repl)
            return


def _step4(w: _Word) -> None:
    for suffix in _STEP4.get(w.b[-2], ()):
        if w.ends(suffix):
            if suffix == "ion" and not (w.j >= 0 and w.b[w.j] in "st"):
                continue
            if w.m() > 1:
                w.b = w.b[: w.j + 1]
            return


def _step5(w: _Word) -> None:
    w.j = len(w.b) - 1
    if w.b[-1] == "e":
        a = w.m()
        if a > 1 or (a == 1 and not w.cvc(len(w.b) - 2)):
            w.b = w.b[:-1]
    w.j = len(w.b) - 1
    if w.b[-1] == "l" and w.double_c(len(w.b) - 1) and w.m() > 1:
        w.b = w.b[:-1]


@lru_cache(maxsize=65536)
def porter_stem(word: str) -> str:
    """Return the Porter stem of a lowercase ``[a-z]+`` word.

    Words of two letters or fewer are returned unchanged.

    >>> porter_stem("caresses"), porter_stem("ponies"), porter_stem("relational")
    ('caress', 'poni', 'relat')
    """
    if len(word) <= 2:
        return word
    w = _Word(word)
    _step1ab(w)
    if len(w.b) > 1:
        _step1c(w)
        _step2(w)
        _step3(w)
        _step4(w)
        _step5(w)
    return w.b
