"""The five classifier families behind one train/predict interface."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from ..vectorize import SparseVector, TermDocMatrix, Vocabulary
from .base import Kind, Model, ModelSpec, Prediction, argmax_label
from .forest import ForestModel, rf_train
from .knn import KNNModel, knn_predict, knn_train
from .nb import NaiveBayesModel, nb_predict, nb_train
from .svm import SMOResult, SVMModel, dual_objective, kkt_violations, smo_solve_binary, svm_train_multiclass
from .tree import C45Model, Tree, best_split, c45_train, entropy

__all__ = [
    "Kind", "Model", "ModelSpec", "Prediction", "argmax_label",
    "nb_train", "nb_predict", "knn_train", "knn_predict",
    "smo_solve_binary", "svm_train_multiclass", "SMOResult", "dual_objective", "kkt_violations",
    "entropy", "best_split", "c45_train", "rf_train", "Tree",
    "train", "predict", "model_to_json", "model_from_json", "save_model", "load_model",
    "ModelFormatError", "DEFAULT_SPECS",
]

FORMAT_VERSION = "1"

_TRAINERS = {
    Kind.NB: nb_train,
    Kind.KNN: knn_train,
    Kind.SVM_SMO: svm_train_multiclass,
    Kind.C45: c45_train,
    Kind.RF: rf_train,
}

_CLASSES: dict[Kind, type[Model]] = {
    Kind.NB: NaiveBayesModel,
    Kind.KNN: KNNModel,
    Kind.SVM_SMO: SVMModel,
    Kind.C45: C45Model,
    Kind.RF: ForestModel,
}

# the order used by sweeps and reports
DEFAULT_SPECS = tuple(ModelSpec(k) for k in (Kind.SVM_SMO, Kind.NB, Kind.C45, Kind.RF, Kind.KNN))


class ModelFormatError(ValueError):
    pass


def train(matrix: TermDocMatrix, spec: ModelSpec) -> Model:
    return _TRAINERS[spec.kind](matrix, spec)


def predict(model: Model, vector: SparseVector, counts: SparseVector | None = None) -> Prediction:
    """Label one document.  NB reads ``counts``; every other kind reads ``vector``."""
    return model.predict(vector, counts)


def model_to_json(model: Model, vocab: Vocabulary, extra: Mapping[str, Any] | None = None) -> dict:
    if len(vocab) != model.dim:
        raise ValueError("vocabulary size does not match the model")
    doc = {
        "version": FORMAT_VERSION,
        "kind": model.kind.value,
        "hyperparameters": model.spec.hyperparameters(),
        "categories": list(model.categories),
        "dim": model.dim,
        "vocabulary_hash": vocab.digest,
        "vocabulary": vocab.to_json(),
        "payload": model.payload(),
    }
    if extra:
        doc.update(extra)
    return doc


def model_from_json(doc: Mapping[str, Any], vocab: Vocabulary | None = None) -> tuple[Model, Vocabulary]:
    """Rebuild a model; refuses documents whose vocabulary hash does not match."""
    try:
        if doc["version"] != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {doc['version']!r}")
        kind = Kind(doc["kind"])
        embedded = Vocabulary.from_json(doc["vocabulary"])
        if embedded.digest != doc["vocabulary_hash"]:
            raise ModelFormatError("embedded vocabulary does not match its hash")
        if vocab is not None and vocab.digest != doc["vocabulary_hash"]:
            raise ModelFormatError("model was trained on a different vocabulary")
        spec = ModelSpec(kind, **doc["hyperparameters"])
        model = _CLASSES[kind].from_payload(spec, doc["categories"], int(doc["dim"]), doc["payload"])
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None
    if model.dim != len(embedded):
        raise ModelFormatError("model dimension does not match its vocabulary")
    return model, embedded


def save_model(path: str | Path, model: Model, vocab: Vocabulary, extra: Mapping[str, Any] | None = None) -> None:
    text = json.dumps(model_to_json(model, vocab, extra), sort_keys=True, separators=(",", ":"))
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model(path: str | Path, vocab: Vocabulary | None = None) -> tuple[Model, Vocabulary, dict]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    model, embedded = model_from_json(doc, vocab)
    return model, embedded, doc
