"""C4.5-style decision trees on numeric features, split by gain ratio.

Only binary threshold splits are grown (``x <= t`` goes left), with
candidate thresholds at midpoints between consecutive distinct values.
No pruning.  The same builder serves the random forest, which restricts the
candidate features at each node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..vectorize import TermDocMatrix
from .base import Kind, Model, ModelSpec, check_trainable

# gain ratios this close to the best count as ties; ties go to the lowest
# feature index, then the lowest threshold
TIE_TOL = 1e-10
MIN_GAIN = 1e-12


def entropy(class_counts: Sequence[int]) -> float:
    """Shannon entropy in bits of a class-count vector."""
    counts = [c for c in class_counts]
    if any(c < 0 for c in counts):
        raise ValueError("class counts must be nonnegative")
    total = sum(counts)
    if total <= 0:
        raise ValueError("entropy of an empty node is undefined")
    h = -sum((c / total) * math.log2(c / total) for c in counts if c > 0)
    return h if h > 0 else 0.0


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Entropy along the last axis of an array of class counts."""
    total = counts.sum(axis=-1, keepdims=True)
    p = np.divide(counts, total, out=np.zeros(counts.shape), where=total > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    gain_ratio: float
    gain: float


def best_split(X: np.ndarray, y: np.ndarray, n_classes: int,
               features: Sequence[int] | None = None, min_leaf: int = 1) -> Split | None:
    """Highest gain-ratio threshold split over ``features`` (default: all).

    Returns ``None`` when no split with positive gain respects ``min_leaf``.
    """
    n = len(y)
    if n < 2 * min_leaf:
        return None
    feats = np.arange(X.shape[1]) if features is None else np.asarray(sorted(features), dtype=np.intp)
    if len(feats) == 0:
        return None
    Xf = X[:, feats]
    varying = Xf.max(axis=0) > Xf.min(axis=0)
    if not varying.any():
        return None
    feats, Xf = feats[varying], Xf[:, varying]

    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    onehot = np.eye(n_classes)[y]                       # (n, C)
    left = np.cumsum(onehot[order], axis=0)             # (n, F, C) counts in x[:p+1]
    parent = onehot.sum(axis=0)
    right = parent - left

    n_left = np.arange(1, n + 1)[:, None]               # (n, 1)
    valid = xs[:-1] < xs[1:]                            # boundary between p and p+1
    valid &= (n_left[:-1] >= min_leaf) & (n - n_left[:-1] >= min_leaf)
    if not valid.any():
        return None

    h_parent = _entropy_rows(parent)
    frac_l = n_left[:-1] / n
    h_children = frac_l * _entropy_rows(left[:-1]) + (1 - frac_l) * _entropy_rows(right[:-1])
    gain = h_parent - h_children
    split_info = -(frac_l * np.log2(frac_l) + (1 - frac_l) * np.log2(1 - frac_l))
    ratio = np.where(valid & (gain > MIN_GAIN), gain / split_info, -np.inf)

    best = ratio.max()
    if not np.isfinite(best):
        return None
    pos, col = np.nonzero(ratio >= best - TIE_TOL * max(1.0, abs(best)))
    # lowest feature index, then lowest threshold
    thresholds = (xs[pos, col] + xs[pos + 1, col]) / 2
    k = min(range(len(pos)), key=lambda m: (feats[col[m]], thresholds[m]))
    p, c = pos[k], col[k]
    return Split(int(feats[c]), float(thresholds[k]), float(ratio[p, c]), float(gain[p, c]))


class Tree:
    """Flat array representation: node ``i`` is a leaf iff ``feature[i] < 0``."""

    def __init__(self, feature, threshold, left, right, counts):
        self.feature = np.asarray(feature, dtype=np.intp)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=np.intp)
        self.right = np.asarray(right, dtype=np.intp)
        self.counts = np.asarray(counts, dtype=float).reshape(len(self.feature), -1)

    def __len__(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        def d(i):
            return 0 if self.feature[i] < 0 else 1 + max(d(self.left[i]), d(self.right[i]))
        return d(0)

    def leaf_of(self, x: np.ndarray) -> int:
        i = 0
        while self.feature[i] >= 0:
            i = self.left[i] if x[self.feature[i]] <= self.threshold[i] else self.right[i]
        return i

    def leaf_counts(self, x: np.ndarray) -> np.ndarray:
        return self.counts[self.leaf_of(x)]

    def to_json(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "counts": self.counts.astype(int).tolist(),
        }

    @classmethod
    def from_json(cls, data) -> "Tree":
        return cls(data["feature"], data["threshold"], data["left"], data["right"], data["counts"])


FeatureChooser = Callable[[np.ndarray, np.ndarray], Split | None]


def grow_tree(X: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int = 1,
              max_depth: int | None = None, choose: FeatureChooser | None = None) -> Tree:
    """Top-down induction; ``choose(X_node, y_node)`` overrides split search."""
    if choose is None:
        def choose(Xn, yn):
            return best_split(Xn, yn, n_classes, min_leaf=min_leaf)

    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(idx):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[idx], minlength=n_classes))
        return len(feature) - 1

    root = new_node(np.arange(len(y)))
    stack = [(root, np.arange(len(y)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        if np.count_nonzero(counts[node]) <= 1:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        split = choose(X[idx], y[idx])
        if split is None:
            continue
        go_left = X[idx, split.feature] <= split.threshold
        li, ri = idx[go_left], idx[~go_left]
        feature[node] = split.feature
        threshold[node] = split.threshold
        left[node] = new_node(li)
        right[node] = new_node(ri)
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))
    return Tree(feature, threshold, left, right, counts)


class C45Model(Model):
    kind = Kind.C45

    def __init__(self, spec, categories, dim, tree: Tree):
        super().__init__(spec, categories, dim)
        self.tree = tree

    def scores(self, tfidf, counts):
        # class distribution of the training documents in the reached leaf
        return self.tree.leaf_counts(tfidf.to_dense(self.dim))

    def payload(self):
        return {"tree": self.tree.to_json()}

    @classmethod
    def from_payload(cls, spec, categories, dim, payload):
        return cls(spec, categories, dim, Tree.from_json(payload["tree"]))


def c45_train(matrix: TermDocMatrix, spec: ModelSpec) -> C45Model:
    check_trainable(matrix)
    tree = grow_tree(matrix.X, matrix.y, len(matrix.categories),
                     min_leaf=spec.min_leaf, max_depth=spec.max_depth)
    return C45Model(spec, matrix.categories, matrix.dim, tree)
