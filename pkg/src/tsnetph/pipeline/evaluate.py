"""Stratified cross-validated 1-nearest-neighbour baseline."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.metrics import f1_score
from sklearn.model_selection import StratifiedKFold

from ..errors import ClassTooSmall, SizeMismatch, TsNetError


@dataclass
class EvalReport:
    fold_f1: List[float]
    folds: np.ndarray = field(repr=False)

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_f1))

    @property
    def std(self) -> float:
        return float(np.std(self.fold_f1))

    @property
    def k(self) -> int:
        return len(self.fold_f1)

    def as_dict(self) -> dict:
        return {
            "fold_f1": [float(v) for v in self.fold_f1],
            "mean": self.mean,
            "std": self.std,
            "folds": [int(v) for v in self.folds],
        }


def zscore(train: np.ndarray, test: np.ndarray):
    """Standardise with training statistics; zero-variance columns become 0.

    Returns the scaled arrays and a mask of the informative columns.
    """
    mu = train.mean(axis=0)
    sd = train.std(axis=0)
    live = sd > 0
    scale = np.where(live, sd, 1.0)
    tr = np.where(live, (train - mu) / scale, 0.0)
    te = np.where(live, (test - mu) / scale, 0.0)
    return tr, te, live


def majority_label(labels: Sequence[str]) -> str:
    """Most frequent label; ties go to the lexicographically smallest."""
    counts = Counter(labels)
    top = max(counts.values())
    return min(lab for lab, c in counts.items() if c == top)


def one_nn_predict(train: np.ndarray, y_train: np.ndarray, test: np.ndarray) -> np.ndarray:
    """Euclidean 1-NN; equal distances go to the earliest training row."""
    return y_train[np.argmin(cdist(test, train, "sqeuclidean"), axis=1)]


def evaluate_baseline(features, labels, K: int = 5, seed: int = 42) -> EvalReport:
    """Macro-F1 of z-score + 1-NN under stratified ``K``-fold cross-validation.

    If a training fold has no informative feature, every test series is given
    the majority training label.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray([str(v) for v in labels])
    if X.ndim != 2 or X.shape[0] != y.size:
        raise SizeMismatch(f"features {X.shape} do not match {y.size} labels")
    if K < 2:
        raise TsNetError("need at least 2 folds")
    counts = Counter(y.tolist())
    small = {lab: c for lab, c in counts.items() if c < K}
    if small:
        raise ClassTooSmall(f"classes with fewer than {K} members: {small}")
    folds = np.empty(y.size, dtype=int)
    scores = []
    skf = StratifiedKFold(n_splits=K, shuffle=True, random_state=seed)
    for f, (tr, te) in enumerate(skf.split(X, y)):
        folds[te] = f
        Xtr, Xte, live = zscore(X[tr], X[te])
        if not live.any():
            pred = np.full(te.size, majority_label(y[tr].tolist()))
        else:
            pred = one_nn_predict(Xtr[:, live], y[tr], Xte[:, live])
        scores.append(float(f1_score(y[te], pred, average="macro", zero_division=0)))
    return EvalReport(scores, folds)
