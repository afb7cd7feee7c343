"""Random forest: bagged gain-ratio trees with random feature subsets per split."""

from __future__ import annotations

import math

import numpy as np

from ..vectorize import TermDocMatrix
from .base import Kind, Model, ModelSpec, check_trainable
from .tree import Tree, best_split, grow_tree


def features_per_split(spec: ModelSpec, dim: int) -> int:
    if spec.max_features == "sqrt":
        return max(1, math.ceil(math.sqrt(dim)))
    if spec.max_features == "all":
        return dim
    return min(int(spec.max_features), dim)


def tree_seeds(seed: int, n_trees: int) -> list[int]:
    """Independent per-tree seeds derived from the forest seed."""
    children = np.random.SeedSequence(seed).spawn(n_trees)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def grow_random_tree(X, y, n_classes, tree_seed, m_try, bootstrap=True, min_leaf=1, max_depth=None) -> Tree:
    rng = np.random.default_rng(tree_seed)
    n, dim = X.shape
    if bootstrap:
        sample = rng.integers(0, n, size=n)
        X, y = X[sample], y[sample]

    def choose(Xn, yn):
        if m_try >= dim:
            return best_split(Xn, yn, n_classes, min_leaf=min_leaf)
        # examine features m_try at a time in random order until one chunk
        # yields a usable split
        perm = rng.permutation(dim)
        for start in range(0, dim, m_try):
            split = best_split(Xn, yn, n_classes, perm[start:start + m_try], min_leaf=min_leaf)
            if split is not None:
                return split
        return None

    return grow_tree(X, y, n_classes, min_leaf=min_leaf, max_depth=max_depth, choose=choose)


class ForestModel(Model):
    kind = Kind.RF

    def __init__(self, spec, categories, dim, trees, seeds):
        super().__init__(spec, categories, dim)
        self.trees = list(trees)
        self.seeds = list(seeds)

    def scores(self, tfidf, counts):
        x = tfidf.to_dense(self.dim)
        votes = np.zeros(len(self.categories))
        for tree in self.trees:
            c = tree.leaf_counts(x)
            # each tree votes for its leaf majority, lexicographic tie-break
            votes[int(np.argmax(c))] += 1
        return votes

    def payload(self):
        return {"seeds": self.seeds, "trees": [t.to_json() for t in self.trees]}

    @classmethod
    def from_payload(cls, spec, categories, dim, payload):
        return cls(spec, categories, dim, [Tree.from_json(t) for t in payload["trees"]], payload["seeds"])


def rf_train(matrix: TermDocMatrix, spec: ModelSpec) -> ForestModel:
    check_trainable(matrix)
    X, y = matrix.X, matrix.y
    m_try = features_per_split(spec, matrix.dim)
    seeds = tree_seeds(spec.seed, spec.n_trees)
    trees = [
        grow_random_tree(X, y, len(matrix.categories), s, m_try, spec.bootstrap,
                         spec.rf_min_leaf, spec.max_depth)
        for s in seeds
    ]
    return ForestModel(spec, matrix.categories, matrix.dim, trees, seeds)
