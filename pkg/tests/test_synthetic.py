from poetclf import synthetic
from poetclf.preprocess import StopwordList, preprocess_text


def test_generator_shape(synth):
    assert set(synth.documents) == {"poet_a", "poet_b", "poet_c"}
    assert all(len(p) == 100 for p in synth.documents.values())
    assert all(len(s) == 20 for s in synth.planted.values())
    assert len(synth.noise) == 500


def test_planted_stems_survive_preprocessing(synth):
    stops = StopwordList.builtin()
    owner = {s: c for c, stems in synth.planted.items() for s in stems}
    assert len(owner) == 60
    for cls, poems in synth.documents.items():
        for poem in poems[:10]:
            tokens = preprocess_text(poem, stops)
            assert {owner[t] for t in tokens if t in owner} == {cls}
            assert set(tokens) <= set(owner) | set(synth.noise)


def test_generator_is_seeded():
    assert synthetic.generate(seed=3) == synthetic.generate(seed=3)
    assert synthetic.generate(seed=3).documents != synthetic.generate(seed=4).documents
