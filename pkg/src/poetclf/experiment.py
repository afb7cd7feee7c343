"""End-to-end pipeline and the feature-count sweep.

corpus -> preprocess -> TF-IDF -> chi-square top-k -> train -> predict test
-> metrics.  Everything is fitted on the training split only.
"""

from __future__ import annotations

import json
import logging
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .classifiers import DEFAULT_SPECS, Kind, Model, ModelSpec, model_to_json, train
from .corpus import Corpus, load_corpus, stratified_split
from .evaluate import MetricsReport, report
from .feature_select import ChiRanking, rank_terms, select_top_k
from .preprocess import StopwordList, preprocess_text
from .vectorize import TermDocMatrix, build_matrix

log = logging.getLogger(__name__)

DEFAULT_FEATURE_COUNTS = (30, 50, 100, 200, 300, 500, 700)
CSV_HEADER = "classifier,k,macro_f,accuracy,seconds"


class PipelineError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: str | None = None
    stopwords: str = "builtin"  # "builtin", "none", or a file path
    train_fraction: float = 0.6
    seed: int = 42
    feature_counts: tuple[int, ...] = DEFAULT_FEATURE_COUNTS
    classifiers: tuple[ModelSpec, ...] = DEFAULT_SPECS
    output_dir: str = "results"
    timing: bool = False  # write measured seconds; off keeps the CSV byte-reproducible

    def __post_init__(self):
        ks = tuple(int(k) for k in self.feature_counts)
        if not ks or any(k < 1 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError(f"feature_counts must be strictly ascending positive integers, got {ks}")
        object.__setattr__(self, "feature_counts", ks)
        if not self.classifiers:
            raise ValueError("at least one classifier is required")
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must lie in (0, 1)")

    @classmethod
    def from_json(cls, data: Mapping[str, Any], **overrides) -> "ExperimentConfig":
        """Every key is optional.  ``classifiers`` entries are kind names or spec objects."""
        data = {**data, **{k: v for k, v in overrides.items() if v is not None}}
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        seed = int(data.get("seed", 42))
        specs = []
        for entry in data.get("classifiers", [s.kind.value for s in DEFAULT_SPECS]):
            if isinstance(entry, ModelSpec):
                specs.append(entry)
                continue
            entry = {"kind": entry} if isinstance(entry, str) else dict(entry)
            entry.setdefault("seed", seed)
            specs.append(ModelSpec.from_json(entry))
        kwargs = {k: v for k, v in data.items() if k != "classifiers"}
        if "feature_counts" in kwargs:
            kwargs["feature_counts"] = tuple(kwargs["feature_counts"])
        return cls(classifiers=tuple(specs), **kwargs)

    @classmethod
    def load(cls, path: str | Path, **overrides) -> "ExperimentConfig":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")), **overrides)

    def stopword_list(self) -> StopwordList:
        if self.stopwords == "builtin":
            return StopwordList.builtin()
        if self.stopwords == "none":
            return StopwordList.empty()
        return StopwordList.from_file(self.stopwords)


@dataclass
class PreparedData:
    """Split corpus, full training matrix and chi-square ranking, computed once."""

    corpus: Corpus
    stops: StopwordList
    train: TermDocMatrix
    test_streams: list[list[str]]
    test_labels: list[str]
    test_ids: list[str]
    ranking: ChiRanking
    _cache: dict[int, tuple[TermDocMatrix, TermDocMatrix]] = field(default_factory=dict, repr=False)

    @property
    def vocab_size(self) -> int:
        return self.train.dim

    def clamp(self, k: int) -> int:
        if k > self.vocab_size:
            warnings.warn(f"k={k} exceeds the vocabulary size {self.vocab_size}; using {self.vocab_size}",
                          stacklevel=3)
            return self.vocab_size
        return k

    def matrices(self, k: int) -> tuple[TermDocMatrix, TermDocMatrix]:
        """Train and test matrices restricted to the top ``k`` terms (``k`` already clamped)."""
        if k not in self._cache:
            train_k = select_top_k(self.train, self.ranking, k)
            test_k = build_matrix(self.test_streams, self.test_labels, self.train.categories,
                                  self.test_ids, vocab=train_k.vocab)
            self._cache[k] = (train_k, test_k)
        return self._cache[k]


def _stage(name: str):
    class _Guard:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, (PipelineError, Warning)):
                raise PipelineError(name, exc) from exc
            return False

    return _Guard()


def split_corpus(corpus: Corpus, train_fraction: float, seed: int) -> Corpus:
    """Honour a split fixed on disk; otherwise split stratified and seeded."""
    return corpus if corpus.is_split else stratified_split(corpus, train_fraction, seed)


def prepare(config: ExperimentConfig, corpus: Corpus | None = None) -> PreparedData:
    with _stage("corpus"):
        if corpus is None:
            if config.corpus is None:
                raise ValueError("no corpus given")
            corpus = load_corpus(config.corpus)
        corpus = split_corpus(corpus, config.train_fraction, config.seed)
    with _stage("preprocess"):
        stops = config.stopword_list()
        train_docs = corpus.train
        test_docs = corpus.test
        train_streams = [preprocess_text(d.text, stops) for d in train_docs]
        test_streams = [preprocess_text(d.text, stops) for d in test_docs]
    with _stage("vectorize"):
        train = build_matrix(train_streams, [d.label for d in train_docs], corpus.categories,
                             [d.id for d in train_docs])
    with _stage("feature_select"):
        ranking = rank_terms(train)
    return PreparedData(corpus, stops, train, test_streams, [d.label for d in test_docs],
                        [d.id for d in test_docs], ranking)


def fit(prepared: PreparedData, spec: ModelSpec, k: int) -> tuple[Model, TermDocMatrix, TermDocMatrix]:
    k = prepared.clamp(k)
    with _stage("feature_select"):
        train_k, test_k = prepared.matrices(k)
    with _stage("classify"):
        model = train(train_k, spec)
    return model, train_k, test_k


def evaluate_model(model: Model, test: TermDocMatrix) -> MetricsReport:
    with _stage("evaluate"):
        preds = [p.label for p in model.predict_matrix(test)]
        return report(preds, list(test.labels), test.categories)


def run_pipeline(config: ExperimentConfig, spec: ModelSpec, k: int,
                 prepared: PreparedData | None = None) -> MetricsReport:
    prepared = prepared or prepare(config)
    model, _, test_k = fit(prepared, spec, k)
    return evaluate_model(model, test_k)


def model_document(prepared: PreparedData, model: Model, train_k: TermDocMatrix,
                   config: ExperimentConfig, k: int) -> dict:
    """Model JSON plus what ``predict``/``evaluate`` need to redo preprocessing."""
    return model_to_json(model, train_k.vocab, extra={
        "preprocess": {"stopwords": sorted(prepared.stops.words)},
        "selection": {"k": k, "full_vocabulary_size": prepared.vocab_size},
        "split": {"train_fraction": config.train_fraction, "seed": config.seed},
    })


@dataclass(frozen=True)
class SweepRow:
    classifier: str
    k: int
    macro_f: float | None
    accuracy: float | None
    seconds: float
    error: str | None = None
    report: MetricsReport | None = None

    def csv_line(self, timing: bool = False) -> str:
        secs = f"{self.seconds:.6f}" if timing else f"{0.0:.6f}"
        if self.error is not None:
            return f"{self.classifier},{self.k},,,{secs}"
        return f"{self.classifier},{self.k},{self.macro_f:.6f},{self.accuracy:.6f},{secs}"


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    timing: bool = False

    def to_csv(self) -> str:
        return "\n".join([CSV_HEADER] + [r.csv_line(self.timing) for r in self.rows]) + "\n"

    def row(self, classifier: str | Kind, k: int) -> SweepRow:
        name = classifier.value if isinstance(classifier, Kind) else classifier
        for r in self.rows:
            if r.classifier == name and r.k == k:
                return r
        raise KeyError((name, k))


def run_sweep(config: ExperimentConfig, prepared: PreparedData | None = None) -> SweepResult:
    """Every (classifier, k) cell, sharing one split, vocabulary and ranking."""
    prepared = prepared or prepare(config)
    rows = []
    for spec in config.classifiers:
        for k in config.feature_counts:
            start = time.perf_counter()
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    rep = run_pipeline(config, spec, k, prepared)
                row = SweepRow(spec.kind.value, k, rep.macro_f, rep.accuracy,
                               time.perf_counter() - start, report=rep)
            except Exception as exc:  # a failed cell must not stop the sweep
                log.error("sweep cell %s k=%d failed: %s", spec.kind.value, k, exc)
                row = SweepRow(spec.kind.value, k, None, None, time.perf_counter() - start, error=str(exc))
            rows.append(row)
    if any(k > prepared.vocab_size for k in config.feature_counts):
        log.warning("feature counts above the vocabulary size (%d) were clamped", prepared.vocab_size)
    return SweepResult(tuple(rows), config.timing)


def write_sweep(result: SweepResult, out_dir: str | Path) -> Path:
    """``sweep.csv`` plus one report JSON per cell under ``reports/``."""
    out = Path(out_dir)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    csv_path.write_text(result.to_csv(), encoding="utf-8", newline="\n")
    for row in result.rows:
        doc = row.report.to_json() if row.report is not None else {"error": row.error}
        doc = {"classifier": row.classifier, "k": row.k, **doc}
        path = out / "reports" / f"{row.classifier}_k{row.k}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n")
    return csv_path

