from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Mapping, Sequence

import numpy as np

from ..vectorize import SparseVector, TermDocMatrix


class Kind(str, enum.Enum):
    NB = "NB"
    KNN = "KNN"
    SVM_SMO = "SVM_SMO"
    C45 = "C45"
    RF = "RF"


# hyperparameters that belong to each kind; everything else in ModelSpec is ignored
_PARAMS = {
    Kind.NB: ("alpha",),
    Kind.KNN: ("k", "metric"),
    Kind.SVM_SMO: ("C", "tol", "max_passes", "max_iter", "seed"),
    Kind.C45: ("min_leaf", "max_depth"),
    Kind.RF: ("n_trees", "max_features", "bootstrap", "rf_min_leaf", "max_depth", "seed"),
}


@dataclass(frozen=True)
class ModelSpec:
    """Classifier family plus its hyperparameters.

    ``max_features`` for RF is ``"sqrt"`` (ceil of the square root of the
    vocabulary size), ``"all"``, or a positive integer.
    """

    kind: Kind
    alpha: float = 1.0
    k: int = 3
    metric: str = "cosine"
    C: float = 1.0
    tol: float = 1e-3
    max_passes: int = 10
    max_iter: int = 100_000
    min_leaf: int = 2
    max_depth: int | None = None
    n_trees: int = 100
    max_features: str | int = "sqrt"
    bootstrap: bool = True
    rf_min_leaf: int = 1
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.metric != "cosine":
            raise ValueError(f"unsupported similarity metric {self.metric!r}")
        if self.C <= 0 or self.tol <= 0:
            raise ValueError("C and tol must be positive")
        if self.max_passes < 1 or self.max_iter < 1:
            raise ValueError("max_passes and max_iter must be positive")
        if self.min_leaf < 1 or self.rf_min_leaf < 1:
            raise ValueError("minimum leaf size must be at least 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")
        if self.n_trees < 1:
            raise ValueError("n_trees must be at least 1")
        mf = self.max_features
        if not (mf in ("sqrt", "all") or (isinstance(mf, int) and not isinstance(mf, bool) and mf >= 1)):
            raise ValueError(f"bad max_features {mf!r}")

    def hyperparameters(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in _PARAMS[self.kind]}

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind.value, **self.hyperparameters()}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ModelSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown model spec fields: {sorted(unknown)}")
        return cls(**data)

    def replace(self, **changes) -> "ModelSpec":
        return ModelSpec(**{**asdict(self), **changes})


@dataclass(frozen=True)
class Prediction:
    label: str
    scores: dict[str, float] = field(default_factory=dict)


def argmax_label(categories: Sequence[str], scores: np.ndarray) -> str:
    """Highest score; equal scores resolve to the lexicographically first class."""
    best = min(range(len(categories)), key=lambda i: (-scores[i], categories[i]))
    return categories[best]


class Model:
    """Trained classifier.  Subclasses hold the kind-specific payload."""

    kind: Kind

    def __init__(self, spec: ModelSpec, categories: Sequence[str], dim: int):
        self.spec = spec
        self.categories = tuple(categories)
        self.dim = dim

    def scores(self, tfidf: SparseVector, counts: SparseVector | None) -> np.ndarray:
        raise NotImplementedError

    def predict(self, tfidf: SparseVector, counts: SparseVector | None = None) -> Prediction:
        for vec in (tfidf, counts):
            if vec is not None and vec.indices and vec.indices[-1] >= self.dim:
                raise ValueError(
                    f"vector has column {vec.indices[-1]} but the model was trained on {self.dim} features"
                )
        s = self.scores(tfidf, counts)
        return Prediction(argmax_label(self.categories, s),
                          {c: float(v) for c, v in zip(self.categories, s)})

    def predict_matrix(self, matrix: TermDocMatrix) -> list[Prediction]:
        if matrix.dim != self.dim:
            raise ValueError(f"matrix has {matrix.dim} features, model expects {self.dim}")
        return [self.predict(v, c) for v, c in zip(matrix.vectors, matrix.counts)]

    def payload(self) -> dict[str, Any]:
        raise NotImplementedError

    @classmethod
    def from_payload(cls, spec: ModelSpec, categories, dim: int, payload: Mapping[str, Any]) -> "Model":
        raise NotImplementedError


def check_trainable(matrix: TermDocMatrix) -> None:
    if len(matrix) == 0:
        raise ValueError("cannot train on an empty matrix")
    present = set(matrix.labels)
    if len(matrix.categories) < 2:
        raise ValueError("training needs at least two classes")
    missing = [c for c in matrix.categories if c not in present]
    if missing:
        raise ValueError(f"classes without training documents: {missing}")
