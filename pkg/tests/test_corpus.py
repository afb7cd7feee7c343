import random

import pytest
from hypothesis import given, strategies as st

from conftest import TABLE1, write_files
from poetclf.corpus import Corpus, CorpusError, Document, Split, load_corpus, stratified_split, train_count


def test_layout_a(tmp_path):
    write_files(tmp_path, {"a/p1.txt": "one", "a/p2.txt": "two", "b/p1.txt": "three"})
    c = load_corpus(tmp_path)
    assert len(c) == 3
    assert c.categories == ("a", "b")
    assert [d.id for d in c.documents] == ["a/p1.txt", "a/p2.txt", "b/p1.txt"]
    assert all(d.split is Split.UNASSIGNED for d in c.documents)
    assert not c.is_split


def test_layout_b(tmp_path):
    write_files(tmp_path, {"train/a/x.txt": "x", "test/a/y.txt": "y"})
    c = load_corpus(tmp_path)
    assert [(d.id, d.split) for d in c.documents] == [("test/a/y.txt", Split.TEST), ("train/a/x.txt", Split.TRAIN)]
    assert c.categories == ("a",)


def test_table1_layout_b(table1_root):
    c = load_corpus(table1_root)
    assert len(c) == 1255
    counts = c.counts()
    for poet, (n_train, n_test) in TABLE1.items():
        assert (counts[poet]["train"], counts[poet]["test"]) == (n_train, n_test)


def test_missing_root(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "nope")


def test_non_utf8_file_named(tmp_path):
    write_files(tmp_path, {"a/ok.txt": "fine", "a/bad.txt": b"\xff\xfe\x00caf\xe9"})
    with pytest.raises(CorpusError, match="bad.txt"):
        load_corpus(tmp_path)


def test_empty_file_named(tmp_path):
    write_files(tmp_path, {"a/ok.txt": "fine", "a/blank.txt": "  \n\t"})
    with pytest.raises(CorpusError, match="blank.txt"):
        load_corpus(tmp_path)


def test_category_without_files(tmp_path):
    write_files(tmp_path, {"a/ok.txt": "fine", "b/notes.md": "not a poem"})
    with pytest.raises(CorpusError, match="b"):
        load_corpus(tmp_path)


def test_order_independent_of_creation_order(tmp_path):
    names = [f"{c}/{i}.txt" for c in "xyz" for i in range(5)]
    random.Random(3).shuffle(names)
    write_files(tmp_path / "one", {n: n for n in names})
    write_files(tmp_path / "two", {n: n for n in reversed(names)})
    assert load_corpus(tmp_path / "one") == load_corpus(tmp_path / "two")


def test_corpus_invariants():
    with pytest.raises(CorpusError):
        Corpus((Document("1", "t", "a"), Document("1", "u", "b")))
    with pytest.raises(CorpusError):
        Corpus((Document("1", "t", "a"),), categories=("a", "b"))


@pytest.mark.parametrize("n,fraction,expected", [
    (10, 0.6, 6), (473, 0.6, 284), (403, 0.6, 242), (379, 0.6, 227), (5, 0.5, 3), (3, 0.5, 2), (7, 0.6, 4),
])
def test_train_count(n, fraction, expected):
    assert train_count(n, fraction) == expected


def _corpus(sizes):
    return Corpus(tuple(Document(f"{c}/{i}", "text", c) for c, n in sizes.items() for i in range(n)))


def test_stratified_split_counts():
    c = stratified_split(_corpus({"a": 10, "b": 473}), 0.6, seed=42)
    counts = c.counts()
    assert (counts["a"]["train"], counts["a"]["test"]) == (6, 4)
    assert (counts["b"]["train"], counts["b"]["test"]) == (284, 189)
    assert counts["a"]["unassigned"] == counts["b"]["unassigned"] == 0


def test_stratified_split_deterministic():
    base = _corpus({"a": 20, "b": 15})
    assert stratified_split(base, 0.6, 7) == stratified_split(base, 0.6, 7)
    assert stratified_split(base, 0.6, 7) != stratified_split(base, 0.6, 8)


def test_adding_a_category_leaves_others_alone():
    one = stratified_split(_corpus({"a": 20, "b": 5}), 0.6, 1)
    two = stratified_split(_corpus({"a": 20, "b": 5, "c": 9}), 0.6, 1)
    assert {d.id: d.split for d in one.documents if d.label == "a"} == \
        {d.id: d.split for d in two.documents if d.label == "a"}


def test_split_errors():
    with pytest.raises(CorpusError):
        stratified_split(_corpus({"a": 5, "b": 1}))
    with pytest.raises(CorpusError):
        stratified_split(stratified_split(_corpus({"a": 5, "b": 5})))
    with pytest.raises(ValueError):
        stratified_split(_corpus({"a": 5, "b": 5}), 1.0)


def test_tiny_categories_keep_both_sides():
    c = stratified_split(_corpus({"a": 2, "b": 2}), 0.9, 0)
    for row in c.counts().values():
        assert row["train"] == 1 and row["test"] == 1


@given(st.dictionaries(st.sampled_from("abcd"), st.integers(2, 40), min_size=1),
       st.floats(0.05, 0.95), st.integers(0, 2**32))
def test_split_is_a_stratified_partition(sizes, fraction, seed):
    c = stratified_split(_corpus(sizes), fraction, seed)
    for cat, row in c.counts().items():
        want = min(max(train_count(sizes[cat], fraction), 1), sizes[cat] - 1)
        assert row["train"] == want
        assert row["train"] + row["test"] == sizes[cat]
        assert row["unassigned"] == 0
