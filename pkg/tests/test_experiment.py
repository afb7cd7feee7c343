import json
import warnings

import pytest

from poetclf.classifiers import Kind, ModelSpec
from poetclf.corpus import Corpus
from poetclf.experiment import (
    CSV_HEADER,
    DEFAULT_FEATURE_COUNTS,
    ExperimentConfig,
    PipelineError,
    fit,
    model_document,
    prepare,
    run_pipeline,
    run_sweep,
    write_sweep,
)


def test_nb_on_planted_corpus(synth_config, synth_prepared):
    rep = run_pipeline(synth_config, ModelSpec(Kind.NB), 50, synth_prepared)
    assert rep.macro_f >= 0.95


def test_clamp_warns_and_matches_full_vocabulary(synth_config, synth_prepared):
    v = synth_prepared.vocab_size
    with pytest.warns(UserWarning, match="vocabulary size"):
        big = run_pipeline(synth_config, ModelSpec(Kind.C45), v + 100, synth_prepared)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        exact = run_pipeline(synth_config, ModelSpec(Kind.C45), v, synth_prepared)
    assert big.dumps() == exact.dumps()


def test_pipeline_reports_are_reproducible(synth_config):
    a = run_pipeline(synth_config, ModelSpec(Kind.RF, n_trees=10), 100)
    b = run_pipeline(synth_config, ModelSpec(Kind.RF, n_trees=10), 100)
    assert a.dumps() == b.dumps()


def test_training_split_only(synth_prepared):
    counts = synth_prepared.corpus.counts()
    assert all(row["train"] == 60 and row["test"] == 40 for row in counts.values())
    assert synth_prepared.train.n_train == 180
    assert len(synth_prepared.test_ids) == 120
    assert not set(synth_prepared.test_ids) & set(synth_prepared.train.doc_ids)


def test_leakage_guard(synth_config, synth_prepared):
    """Deleting every test document changes no trained model's bytes."""
    train_only = Corpus(tuple(synth_prepared.corpus.train), synth_prepared.corpus.categories)
    stripped = prepare(synth_config, train_only)
    for spec in synth_config.classifiers:
        docs = []
        for prepared in (synth_prepared, stripped):
            model, train_k, _ = fit(prepared, spec, 100)
            docs.append(json.dumps(model_document(prepared, model, train_k, synth_config, 100), sort_keys=True))
        assert docs[0] == docs[1], spec.kind


def test_sweep_shape_and_order(synth_sweep):
    result, _ = synth_sweep
    assert len(result.rows) == 35
    expected = [(k.value, n) for k in (Kind.SVM_SMO, Kind.NB, Kind.C45, Kind.RF, Kind.KNN)
                for n in DEFAULT_FEATURE_COUNTS]
    assert [(r.classifier, r.k) for r in result.rows] == expected
    assert all(r.error is None and 0 <= r.macro_f <= 1 for r in result.rows)


def test_sweep_rows_match_independent_runs(synth_config, synth_sweep):
    result, _ = synth_sweep
    for spec in synth_config.classifiers:
        for k in (30, 200, 700):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rep = run_pipeline(synth_config, spec, k)
            assert result.row(spec.kind, k).report.dumps() == rep.dumps()


def test_sweep_csv_schema(synth_sweep):
    result, _ = synth_sweep
    text = result.to_csv()
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER
    assert text.endswith("\n") and "\r" not in text
    for line in lines[1:-1]:
        clf, k, mf, acc, secs = line.split(",")
        assert clf in {k.value for k in Kind} and int(k) > 0
        for cell in (mf, acc, secs):
            assert len(cell.split(".")[1]) == 6


def test_timing_is_opt_in(synth_config, synth_prepared):
    cfg = ExperimentConfig(corpus=synth_config.corpus, feature_counts=(30,),
                           classifiers=(ModelSpec(Kind.NB),))
    assert run_sweep(cfg, synth_prepared).to_csv().splitlines()[1].endswith(",0.000000")
    timed = ExperimentConfig(**{**cfg.__dict__, "timing": True})
    secs = float(run_sweep(timed, synth_prepared).to_csv().splitlines()[1].split(",")[-1])
    assert secs > 0


def test_single_cell_sweep_equals_pipeline(synth_config, synth_prepared):
    cfg = ExperimentConfig(corpus=synth_config.corpus, feature_counts=(50,),
                           classifiers=(ModelSpec(Kind.KNN),))
    result = run_sweep(cfg, synth_prepared)
    assert len(result.rows) == 1
    assert result.rows[0].report.dumps() == run_pipeline(cfg, ModelSpec(Kind.KNN), 50).dumps()


def test_failed_cell_does_not_stop_sweep(synth_config, synth_prepared):
    cfg = ExperimentConfig(corpus=synth_config.corpus, feature_counts=(30, 50),
                           classifiers=(ModelSpec(Kind.KNN, k=5000), ModelSpec(Kind.NB)))
    result = run_sweep(cfg, synth_prepared)
    assert [r.error is not None for r in result.rows] == [True, True, False, False]
    assert result.to_csv().splitlines()[1] == "KNN,30,,,0.000000"


def test_write_sweep(tmp_path, synth_sweep):
    result, _ = synth_sweep
    path = write_sweep(result, tmp_path / "out")
    assert path.read_text() == result.to_csv()
    reports = sorted((tmp_path / "out" / "reports").iterdir())
    assert len(reports) == 35
    doc = json.loads((tmp_path / "out" / "reports" / "NB_k100.json").read_text())
    assert doc["classifier"] == "NB" and doc["k"] == 100 and "confusion" in doc


def test_stage_names(tmp_path, synth_root):
    with pytest.raises(PipelineError) as err:
        prepare(ExperimentConfig(corpus=str(tmp_path / "missing")))
    assert err.value.stage == "corpus"
    with pytest.raises(PipelineError) as err:
        prepare(ExperimentConfig(corpus=str(synth_root), stopwords=str(tmp_path / "nostops.txt")))
    assert err.value.stage == "preprocess"


def test_layout_b_split_is_used(table1_root):
    prepared = prepare(ExperimentConfig(corpus=str(table1_root), seed=999, train_fraction=0.3))
    assert prepared.train.n_train == 284 + 241 + 227


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(feature_counts=(50, 30))
    with pytest.raises(ValueError):
        ExperimentConfig(feature_counts=(30, 30))
    with pytest.raises(ValueError):
        ExperimentConfig(classifiers=())
    with pytest.raises(ValueError):
        ExperimentConfig.from_json({"corpus": "x", "colour": "red"})


def test_config_from_json(tmp_path):
    cfg = ExperimentConfig.from_json({})
    assert cfg.feature_counts == DEFAULT_FEATURE_COUNTS and cfg.seed == 42 and len(cfg.classifiers) == 5
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"corpus": "c", "seed": 7, "feature_counts": [10, 20],
                                "classifiers": ["NB", {"kind": "RF", "n_trees": 5}]}))
    cfg = ExperimentConfig.load(path, output_dir="o")
    assert cfg.output_dir == "o" and cfg.feature_counts == (10, 20)
    assert [s.kind for s in cfg.classifiers] == [Kind.NB, Kind.RF]
    assert cfg.classifiers[1].n_trees == 5 and cfg.classifiers[1].seed == 7
