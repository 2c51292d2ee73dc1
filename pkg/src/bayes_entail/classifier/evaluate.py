"""Accuracy, ROC/AUC and timing for the entailment classifier."""

from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from ..model import UNDEFINED
from .data import Dataset, SplitConfig, split
from .model import DEFAULT_GRID, TrainedModel, goal_probability


def roc_curve(scores: Sequence[float], labels: Sequence[int]
              ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ROC points from sweeping the threshold over the distinct scores.

    A row is predicted positive at threshold ``t`` iff ``score >= t``.
    Returns ``(fpr, tpr, thresholds)`` starting at (0, 0) with threshold +inf.
    NaN scores (undefined probabilities) are never predicted positive.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=bool)
    P, N = int(y.sum()), int((~y).sum())
    if P == 0 or N == 0:
        raise ValueError("ROC needs both positive and negative rows")
    finite = ~np.isnan(s)
    thresholds = np.concatenate(([np.inf], np.unique(s[finite])[::-1]))
    tpr, fpr = [], []
    for t in thresholds:
        pred = finite & (s >= t)
        tpr.append((pred & y).sum() / P)
        fpr.append((pred & ~y).sum() / N)
    if np.any(~finite):
        # the undefined rows join last, below every threshold
        thresholds = np.append(thresholds, -np.inf)
        tpr.append(1.0)
        fpr.append(1.0)
    return np.array(fpr), np.array(tpr), thresholds


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Trapezoidal area under :func:`roc_curve`."""
    fpr, tpr, _ = roc_curve(scores, labels)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2))


def rank_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """P(score of a random positive > score of a random negative), ties 1/2."""
    s = np.asarray(scores, dtype=float)
    s = np.where(np.isnan(s), -np.inf, s)
    y = np.asarray(labels, dtype=bool)
    pos, neg = s[y], s[~y]
    if pos.size == 0 or neg.size == 0:
        raise ValueError("AUC needs both positive and negative rows")
    greater = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((greater + 0.5 * ties) / (pos.size * neg.size))


@dataclass
class Metrics:
    accuracy: float
    auc: float
    runtime_per_prediction: float
    probabilities: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("probabilities")
        return d


def evaluate(model: TrainedModel, test: Dataset, theta: float = 0.5) -> Metrics:
    """Accuracy at ``theta``, AUC over all thresholds, mean seconds per query.

    A row counts as correct when its own goal is entailed at ``theta``;
    AUC ranks rows by the probability of the positive goal.
    """
    if len(test) == 0:
        raise ValueError("empty test set")
    pos = model.positive_code
    probs: list[float] = []
    start = time.perf_counter()
    for x in test.X:
        p = goal_probability(model.worlds, x, pos, model.mu_hat)
        probs.append(float("nan") if p is UNDEFINED else p)
    elapsed = time.perf_counter() - start
    correct = 0
    for x, g in zip(test.X, test.y):
        p = goal_probability(model.worlds, x, int(g), model.mu_hat)
        correct += p is not UNDEFINED and p >= theta
    labels = test.y == pos
    try:
        auc = rank_auc(probs, labels)
    except ValueError:
        auc = float("nan")
    return Metrics(correct / len(test), auc, elapsed / len(test), probs)


def majority_accuracy(train: Dataset, test: Dataset) -> float:
    """Accuracy of always predicting the most frequent training goal."""
    codes, counts = np.unique(train.y, return_counts=True)
    top = codes[np.argmax(counts)]
    return float(np.mean(test.y == top))


def run_protocol(ds: Dataset, n_splits: int = 100, seed: int = 0,
                 grid: Sequence[float] = DEFAULT_GRID, theta: float = 0.5,
                 cfg: SplitConfig = SplitConfig()) -> dict:
    """Repeat split / fit / select-mu / evaluate over ``n_splits`` seeds.

    Split ``i`` uses seed ``seed + i``.  Returns per-split records and the
    mean and sample standard deviation of each metric.
    """
    records = []
    for i in range(n_splits):
        s = seed + i
        train, cv, test = split(ds, SplitConfig(cfg.train, cfg.cv, s))
        model = TrainedModel.fit(train, cv, grid)
        m = evaluate(model, test, theta)
        records.append({"seed": s, "mu_hat": model.mu_hat, "accuracy": m.accuracy,
                        "auc": m.auc, "runtime_per_prediction_s": m.runtime_per_prediction,
                        "baseline_accuracy": majority_accuracy(train, test)})

    def summary(key: str) -> dict:
        vals = [r[key] for r in records]
        sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
        return {"mean": statistics.fmean(vals), "std": sd}

    return {
        "splits": n_splits,
        "seed": seed,
        "accuracy": summary("accuracy"),
        "auc": summary("auc"),
        "runtime_per_prediction_s": summary("runtime_per_prediction_s"),
        "baseline_accuracy": summary("baseline_accuracy"),
        "mu_hat": [r["mu_hat"] for r in records],
        "per_split": records,
    }
