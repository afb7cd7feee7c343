import json

import pytest

from conftest import write_files
from poetclf.cli import main
from poetclf.classifiers import Kind, ModelSpec
from poetclf.experiment import run_pipeline


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ingest_table1(capsys, table1_root):
    code, out, _ = run(capsys, "ingest", "--corpus", str(table1_root))
    assert code == 0
    lines = out.splitlines()
    assert "documents,1255" in lines
    assert "adryan_rotica,284,189,473" in lines
    assert "lamar_cole,241,162,403" in lines
    assert "richard_allen_beevor,227,152,379" in lines


def test_ingest_layout_a_split(capsys, synth_root):
    code, out, _ = run(capsys, "ingest", "--corpus", str(synth_root))
    assert code == 0
    assert "poet_a,60,40,100" in out.splitlines()


def test_sweep_from_config(capsys, tmp_path, synth_root):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"corpus": str(synth_root), "output_dir": str(tmp_path / "out")}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert lines[0] == "classifier,k,macro_f,accuracy,seconds"
    assert len(lines) == 36
    assert len(list((tmp_path / "out" / "reports").glob("*.json"))) == 35


def test_train_predict_evaluate(capsys, tmp_path, synth_root, synth_config):
    model = tmp_path / "nb.json"
    code, _, _ = run(capsys, "train", "--corpus", str(synth_root), "--classifier", "nb",
                     "--k", "50", "--params", '{"alpha": 0.5}', "--out", str(model))
    assert code == 0
    doc = json.loads(model.read_text())
    assert doc["kind"] == "NB" and doc["hyperparameters"] == {"alpha": 0.5}
    assert doc["dim"] == 50 and doc["selection"]["k"] == 50

    poem = synth_root / "poet_c" / "007.txt"
    code, out, _ = run(capsys, "predict", "--model", str(model), str(poem))
    assert code == 0 and out == f"{poem}\tpoet_c\n"

    code, out, _ = run(capsys, "evaluate", "--model", str(model), "--corpus", str(synth_root))
    assert code == 0
    assert out == run_pipeline(synth_config, ModelSpec(Kind.NB, alpha=0.5), 50).dumps()


def test_predict_missing_file(capsys, tmp_path, synth_root):
    model = tmp_path / "m.json"
    assert run(capsys, "train", "--corpus", str(synth_root), "--classifier", "C45",
               "--k", "30", "--out", str(model))[0] == 0
    code, out, err = run(capsys, "predict", "--model", str(model), "missing.txt")
    assert code == 2 and "missing.txt" in err and out == ""


def test_rank(capsys, tmp_path, synth_root, synth_prepared):
    code, out, _ = run(capsys, "rank", "--corpus", str(synth_root))
    assert code == 0
    assert out == synth_prepared.ranking.to_csv()
    run(capsys, "rank", "--corpus", str(synth_root), "--out", str(tmp_path / "r.csv"))
    assert (tmp_path / "r.csv").read_text() == out


def test_synth(capsys, tmp_path):
    code, out, _ = run(capsys, "synth", "--out", str(tmp_path / "c"))
    assert code == 0
    assert len(list((tmp_path / "c").rglob("*.txt"))) == 300


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["ingest"], ["ingest", "--corpus", "x", "--frobnicate"],
    ["train", "--corpus", "x", "--classifier", "LDA", "--out", "m.json"],
    ["sweep"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert "usage" in err or "sweep needs" in err


def test_bad_params_is_usage_error(capsys, synth_root, tmp_path):
    for params in ("{not json", '{"gamma": 1}', "[1]"):
        code, _, err = run(capsys, "train", "--corpus", str(synth_root), "--classifier", "NB",
                           "--params", params, "--out", str(tmp_path / "m.json"))
        assert code == 1 and "--params" in err


def test_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "sweep" in out


@pytest.mark.parametrize("setup", ["missing_root", "bad_utf8", "bad_model", "wrong_version"])
def test_data_errors(capsys, tmp_path, setup):
    if setup == "missing_root":
        argv = ["ingest", "--corpus", str(tmp_path / "none")]
    elif setup == "bad_utf8":
        write_files(tmp_path / "c", {"a/x.txt": "fine", "b/y.txt": b"\xff\xfe"})
        argv = ["ingest", "--corpus", str(tmp_path / "c")]
    else:
        model = tmp_path / "m.json"
        model.write_text("{broken" if setup == "bad_model" else json.dumps({"version": "9"}))
        argv = ["predict", "--model", str(model), str(model)]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("poetclf: error:")
    if setup == "bad_utf8":
        assert "y.txt" in err
