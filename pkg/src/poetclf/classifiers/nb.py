"""Multinomial Naive Bayes over raw term counts with additive smoothing."""

from __future__ import annotations

import numpy as np

from ..vectorize import SparseVector, TermDocMatrix
from .base import Kind, Model, ModelSpec, check_trainable


class NaiveBayesModel(Model):
    kind = Kind.NB

    def __init__(self, spec, categories, dim, log_prior, log_likelihood):
        super().__init__(spec, categories, dim)
        self.log_prior = np.asarray(log_prior, dtype=float)
        self.log_likelihood = np.asarray(log_likelihood, dtype=float)  # (n_classes, dim)

    def scores(self, tfidf, counts):
        if counts is None:
            raise ValueError("Naive Bayes needs term counts, not TF-IDF weights")
        s = self.log_prior.copy()
        if counts.indices:
            cols = list(counts.indices)
            s += self.log_likelihood[:, cols] @ np.asarray(counts.values)
        return s

    def payload(self):
        return {"log_prior": self.log_prior.tolist(), "log_likelihood": self.log_likelihood.tolist()}

    @classmethod
    def from_payload(cls, spec, categories, dim, payload):
        return cls(spec, categories, dim, payload["log_prior"], payload["log_likelihood"])


def nb_train(matrix: TermDocMatrix, spec: ModelSpec | float = 1.0) -> NaiveBayesModel:
    """Fit class priors ``n_c / N`` and smoothed likelihoods.

    ``P(t|c) = (count(t, c) + alpha) / (sum_t' count(t', c) + alpha |V|)``
    """
    if not isinstance(spec, ModelSpec):
        spec = ModelSpec(Kind.NB, alpha=float(spec))
    check_trainable(matrix)
    n_classes = len(matrix.categories)
    y = matrix.y
    class_docs = np.bincount(y, minlength=n_classes)
    log_prior = np.log(class_docs / len(matrix))

    totals = np.zeros((n_classes, matrix.dim))
    np.add.at(totals, y, matrix.C)
    alpha = spec.alpha
    denom = totals.sum(axis=1, keepdims=True) + alpha * matrix.dim
    log_likelihood = np.log(totals + alpha) - np.log(denom)
    return NaiveBayesModel(spec, matrix.categories, matrix.dim, log_prior, log_likelihood)


def nb_predict(model: NaiveBayesModel, counts: SparseVector):
    return model.predict(SparseVector(), counts)
