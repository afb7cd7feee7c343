"""Linear SVM trained with sequential minimal optimization.

The binary solver repeatedly picks the pair of multipliers that most
violates the optimality conditions (largest minus smallest implied bias)
and solves that two-variable subproblem in closed form, stopping once the
spread of implied biases is within ``tol``.  Multiclass problems are split
one-vs-one.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..vectorize import SparseVector, TermDocMatrix
from .base import Kind, Model, ModelSpec, check_trainable

log = logging.getLogger(__name__)

# moves smaller than this are treated as no progress
_MIN_STEP = 1e-12


@dataclass
class SMOResult:
    alpha: np.ndarray
    b: float
    converged: bool
    iterations: int


def dual_objective(alpha: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    """``sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij``."""
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def kkt_violations(alpha, y, K, b, C) -> np.ndarray:
    """Per-sample amount by which the KKT conditions are broken (0 if satisfied)."""
    r = y * (K @ (alpha * y) + b) - 1.0  # y_i f(x_i) - 1
    at_zero = alpha <= 0
    at_c = alpha >= C
    free = ~(at_zero | at_c)
    v = np.zeros_like(r)
    v[at_zero] = np.maximum(0.0, -r[at_zero])
    v[at_c] = np.maximum(0.0, r[at_c])
    v[free] = np.abs(r[free])
    return v


def refit_bias(alpha, y, K, C) -> float:
    """Bias that best satisfies the KKT conditions for fixed multipliers.

    Mean of ``y_i - g_i`` over free multipliers when there are any, else the
    midpoint of the interval allowed by the bound multipliers.
    """
    g = K @ (alpha * y)
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(np.mean(y[free] - g[free]))
    target = y - g
    # alpha = 0 wants y (g + b) >= 1; alpha = C wants y (g + b) <= 1
    lower_mask = ((alpha <= 0) & (y > 0)) | ((alpha >= C) & (y < 0))
    upper_mask = ~lower_mask
    lo = target[lower_mask].max() if lower_mask.any() else -np.inf
    hi = target[upper_mask].min() if upper_mask.any() else np.inf
    if np.isfinite(lo) and np.isfinite(hi):
        return float(0.5 * (lo + hi))
    return float(lo if np.isfinite(lo) else hi)


def _as_dense(rows) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(rows, tuple) and len(rows) == 2 and isinstance(rows[0], np.ndarray):
        X, y = rows
        return np.asarray(X, dtype=float), np.asarray(y, dtype=float)
    rows = list(rows)
    dim = 1 + max((v.indices[-1] for v, _ in rows if v.indices), default=-1)
    X = np.zeros((len(rows), max(dim, 1)))
    for r, (v, _) in enumerate(rows):
        if v.indices:
            X[r, list(v.indices)] = v.values
    return X, np.array([lab for _, lab in rows], dtype=float)


def smo_solve_binary(
    rows: Sequence[tuple[SparseVector, int]] | tuple[np.ndarray, np.ndarray],
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 10,
    seed: int = 42,
    max_iter: int = 100_000,
    K: np.ndarray | None = None,
) -> SMOResult:
    """Solve the linear-kernel SVM dual for labels in {-1, +1}.

    ``rows`` is either a list of ``(SparseVector, label)`` pairs or a dense
    ``(X, y)`` tuple.  A precomputed Gram matrix may be passed as ``K``.

    Each step optimises the maximal violating pair analytically.  If that
    pair cannot move, the other violators are tried as partners in seeded
    random order; ``max_passes`` such fruitless rounds in a row, or running
    out of ``max_iter`` steps, ends the solve with ``converged=False``.
    """
    X, y = _as_dense(rows)
    if not set(np.unique(y)) == {-1.0, 1.0}:
        raise ValueError("both labels -1 and +1 must be present")
    if C <= 0 or tol <= 0:
        raise ValueError("C and tol must be positive")
    if K is None:
        K = X @ X.T
    n = len(y)
    rng = np.random.default_rng(seed)
    alpha = np.zeros(n)
    # F_i = y_i - sum_j alpha_j y_j K_ij: the bias each sample would ask for
    F = y.copy()

    def take_step(i, j) -> bool:
        if i == j:
            return False
        ai, aj = alpha[i], alpha[j]
        if y[i] != y[j]:
            lo, hi = max(0.0, aj - ai), min(C, C + aj - ai)
        else:
            lo, hi = max(0.0, ai + aj - C), min(C, ai + aj)
        if hi - lo <= 0:
            return False
        eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
        # E_i - E_j, the bias cancels
        e_diff = F[j] - F[i]
        if eta < 0:
            aj_new = min(hi, max(lo, aj - y[j] * e_diff / eta))
        else:
            # flat direction: the objective is linear along it, take the better end
            slope = y[j] * e_diff
            if abs(slope) < 1e-15:
                return False
            aj_new = hi if slope > 0 else lo
        if abs(aj_new - aj) < _MIN_STEP:
            return False
        ai_new = ai + y[i] * y[j] * (aj - aj_new)
        # snap to the box so bound membership is exact
        ai_new = _snap(ai_new, C)
        aj_new = _snap(aj_new, C)
        di, dj = ai_new - ai, aj_new - aj
        F[:] -= y[i] * di * K[i] + y[j] * dj * K[j]
        alpha[i], alpha[j] = ai_new, aj_new
        return True

    converged = False
    stuck = 0
    it = 0
    while it < max_iter:
        lower, upper = _bias_sets(alpha, y, C)
        i = int(np.flatnonzero(lower)[np.argmax(F[lower])])
        j = int(np.flatnonzero(upper)[np.argmin(F[upper])])
        if F[i] - F[j] <= tol:
            converged = True
            break
        it += 1
        if take_step(i, j):
            stuck = 0
            continue
        # maximal pair is blocked: try i against the other violators
        partners = np.flatnonzero(upper & (F < F[i] - tol))
        moved = any(take_step(i, int(p)) for p in rng.permutation(partners) if p != j)
        if not moved:
            stuck += 1
            if stuck >= max_passes:
                break

    F[:] = y - K @ (alpha * y)  # drop accumulated rounding before the final bias
    b = refit_bias(alpha, y, K, C)
    if converged:
        converged = bool(kkt_violations(alpha, y, K, b, C).max() <= tol)
    return SMOResult(alpha, float(b), converged, it)


def _snap(a: float, C: float) -> float:
    if a < C * 1e-12:
        return 0.0
    if a > C * (1 - 1e-12):
        return C
    return a


def _bias_sets(alpha, y, C):
    """Masks of samples that bound the bias from below and from above."""
    free = (alpha > 0) & (alpha < C)
    at_zero = alpha <= 0
    at_c = alpha >= C
    lower = free | (at_zero & (y > 0)) | (at_c & (y < 0))
    upper = free | (at_zero & (y < 0)) | (at_c & (y > 0))
    return lower, upper


class SVMModel(Model):
    """One linear machine per unordered class pair; the first class of a pair is +1."""

    kind = Kind.SVM_SMO

    def __init__(self, spec, categories, dim, machines, support=None):
        super().__init__(spec, categories, dim)
        # machines: list of (i, j, w, b) with class indices i < j
        self.machines = [(int(i), int(j), np.asarray(w, dtype=float), float(b)) for i, j, w, b in machines]
        # per machine: {training row index: alpha} for the support vectors
        self.support = support if support is not None else [{} for _ in self.machines]

    def decisions(self, tfidf: SparseVector) -> list[float]:
        x = tfidf.to_dense(self.dim)
        return [float(w @ x + b) for _, _, w, b in self.machines]

    def scores(self, tfidf, counts):
        n = len(self.categories)
        votes = np.zeros(n)
        margin = np.zeros(n)
        for (i, j, _, _), f in zip(self.machines, self.decisions(tfidf)):
            votes[i if f >= 0 else j] += 1
            margin[i] += f
            margin[j] -= f
        # vote count plus a bounded margin term: margins only break vote ties
        return votes + 0.5 * np.tanh(margin) * (1 - 1e-9)

    def payload(self):
        return {"machines": [
            {"pos": self.categories[i], "neg": self.categories[j], "w": w.tolist(), "b": b,
             "support": {"rows": list(sv), "alpha": list(sv.values())}}
            for (i, j, w, b), sv in zip(self.machines, self.support)
        ]}

    @classmethod
    def from_payload(cls, spec, categories, dim, payload):
        pos = {c: k for k, c in enumerate(categories)}
        machines = payload["machines"]
        support = [dict(zip(m["support"]["rows"], m["support"]["alpha"])) if "support" in m else {}
                   for m in machines]
        return cls(spec, categories, dim,
                   [(pos[m["pos"]], pos[m["neg"]], m["w"], m["b"]) for m in machines], support)


def svm_train_multiclass(matrix: TermDocMatrix, spec: ModelSpec) -> SVMModel:
    check_trainable(matrix)
    X, yk = matrix.X, matrix.y
    machines, support = [], []
    for i, j in itertools.combinations(range(len(matrix.categories)), 2):
        mask = (yk == i) | (yk == j)
        rows = np.flatnonzero(mask)
        Xp = X[mask]
        yp = np.where(yk[mask] == i, 1.0, -1.0)
        res = smo_solve_binary((Xp, yp), C=spec.C, tol=spec.tol, max_passes=spec.max_passes,
                               seed=spec.seed, max_iter=spec.max_iter)
        if not res.converged:
            log.warning("SMO did not converge for %s vs %s after %d steps",
                        matrix.categories[i], matrix.categories[j], res.iterations)
        w = (res.alpha * yp) @ Xp
        machines.append((i, j, w, res.b))
        support.append({int(r): float(a) for r, a in zip(rows, res.alpha) if a > 0})
    return SVMModel(spec, matrix.categories, matrix.dim, machines, support)
