from __future__ import annotations

import time
from pathlib import Path

import pytest

from poetclf import synthetic
from poetclf.experiment import ExperimentConfig, prepare, run_sweep

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}

TABLE1 = {"adryan_rotica": (284, 189), "lamar_cole": (241, 162), "richard_allen_beevor": (227, 152)}


def write_files(root: Path, files: dict[str, str | bytes]) -> Path:
    for rel, text in files.items():
        p = root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(text, bytes):
            p.write_bytes(text)
        else:
            p.write_text(text, encoding="utf-8")
    return root


@pytest.fixture(scope="session")
def table1_root(tmp_path_factory) -> Path:
    """Layout-B corpus with the per-poet train/test counts of the original study."""
    root = tmp_path_factory.mktemp("table1")
    files = {}
    for poet, (n_train, n_test) in TABLE1.items():
        for split, n in (("train", n_train), ("test", n_test)):
            for i in range(n):
                files[f"{split}/{poet}/{i:03d}.txt"] = f"{poet} poem {split} {i}\n"
    return write_files(root, files)


@pytest.fixture(scope="session")
def synth() -> synthetic.SyntheticCorpus:
    return synthetic.generate(seed=42)


@pytest.fixture(scope="session")
def synth_root(tmp_path_factory, synth) -> Path:
    return synthetic.write_corpus(synth, tmp_path_factory.mktemp("synth") / "corpus")


@pytest.fixture(scope="session")
def synth_config(synth_root) -> ExperimentConfig:
    return ExperimentConfig(corpus=str(synth_root), seed=42, train_fraction=0.6)


@pytest.fixture(scope="session")
def synth_prepared(synth_config):
    return prepare(synth_config)


@pytest.fixture(scope="session")
def synth_sweep(synth_config):
    """The full default sweep, timed from an unprepared config."""
    start = time.perf_counter()
    result = run_sweep(synth_config)
    return result, time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES.values():
            terminalreporter.write_line(line)
