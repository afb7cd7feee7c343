"""k-nearest neighbours by cosine similarity; training just stores the rows."""

from __future__ import annotations

import numpy as np

from ..vectorize import SparseVector, TermDocMatrix
from .base import Kind, Model, ModelSpec, Prediction, check_trainable


def _unit_rows(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    # zero rows stay zero, giving similarity 0 with everything
    return np.divide(X, norms, out=np.zeros_like(X), where=norms > 0)


class KNNModel(Model):
    kind = Kind.KNN

    def __init__(self, spec, categories, dim, X, y):
        super().__init__(spec, categories, dim)
        self.X = np.asarray(X, dtype=float).reshape(-1, dim)
        self.y = np.asarray(y, dtype=np.intp)
        if not 1 <= spec.k <= len(self.y):
            raise ValueError(f"k={spec.k} outside [1, {len(self.y)}]")
        self._unit = _unit_rows(self.X)

    def similarities(self, query: SparseVector) -> np.ndarray:
        q = query.to_dense(self.dim)
        norm = np.linalg.norm(q)
        if norm == 0:
            return np.zeros(len(self.y))
        return self._unit @ (q / norm)

    def neighbours(self, query: SparseVector) -> np.ndarray:
        sims = self.similarities(query)
        # stable sort: equal similarities keep the lower row index first
        return np.argsort(-sims, kind="stable")[: self.spec.k]

    def scores(self, tfidf, counts):
        votes = np.bincount(self.y[self.neighbours(tfidf)], minlength=len(self.categories))
        return votes.astype(float)

    def payload(self):
        rows = [SparseVector.from_dict(dict(enumerate(r))) for r in self.X]
        return {
            "rows": [{"i": list(v.indices), "v": list(v.values)} for v in rows],
            "y": self.y.tolist(),
        }

    @classmethod
    def from_payload(cls, spec, categories, dim, payload):
        X = np.zeros((len(payload["y"]), dim))
        for r, row in enumerate(payload["rows"]):
            X[r, row["i"]] = row["v"]
        return cls(spec, categories, dim, X, payload["y"])


def knn_train(matrix: TermDocMatrix, spec: ModelSpec) -> KNNModel:
    check_trainable(matrix)
    return KNNModel(spec, matrix.categories, matrix.dim, matrix.X, matrix.y)


def knn_predict(train: TermDocMatrix, query: SparseVector, k: int) -> Prediction:
    return knn_train(train, ModelSpec(Kind.KNN, k=k)).predict(query)
