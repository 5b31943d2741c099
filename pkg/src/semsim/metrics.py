"""Confusion counts, F1 scores and rank correlation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from semsim.corpus import Label
from semsim.errors import SemsimError


@dataclass(frozen=True)
class ConfusionCounts:
    """Counts with Plagiarism as the positive class."""

    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @classmethod
    def from_labels(cls, gold: Iterable[Label], pred: Iterable[Label]) -> "ConfusionCounts":
        tp = fp = tn = fn = 0
        for g, p in zip(gold, pred, strict=True):
            if g is Label.PLAGIARISM:
                if p is Label.PLAGIARISM:
                    tp += 1
                else:
                    fn += 1
            elif p is Label.PLAGIARISM:
                fp += 1
            else:
                tn += 1
        return cls(tp, fp, tn, fn)

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def as_dict(self) -> dict[str, int]:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def _f1(hits: int, false_alarms: int, misses: int) -> float:
    denom = 2 * hits + false_alarms + misses
    # 2PR/(P+R) written in counts; P+R = 0 exactly when hits = 0
    return 2 * hits / denom if hits else 0.0


def per_class_f1(c: ConfusionCounts) -> dict[Label, float]:
    if c.total == 0:
        raise SemsimError("F1 is undefined for zero evaluated instances")
    return {
        Label.PLAGIARISM: _f1(c.tp, c.fp, c.fn),
        Label.NOT_PLAGIARISM: _f1(c.tn, c.fn, c.fp),
    }


def macro_f1(c: ConfusionCounts) -> float:
    """Unweighted mean of the two per-class F1 values."""
    scores = per_class_f1(c)
    return (scores[Label.PLAGIARISM] + scores[Label.NOT_PLAGIARISM]) / 2


def accuracy(c: ConfusionCounts) -> float:
    if c.total == 0:
        raise SemsimError("accuracy is undefined for zero evaluated instances")
    return (c.tp + c.tn) / c.total


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation; tied values share their average rank."""
    if len(xs) != len(ys):
        raise SemsimError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise SemsimError("spearman needs at least two observations")
    rx = rankdata(np.asarray(xs, dtype=float)) - (len(xs) + 1) / 2
    ry = rankdata(np.asarray(ys, dtype=float)) - (len(ys) + 1) / 2
    sx, sy = float(rx @ rx), float(ry @ ry)
    if sx == 0.0 or sy == 0.0:
        raise SemsimError("spearman is undefined for a constant sequence")
    return max(-1.0, min(1.0, float(rx @ ry) / np.sqrt(sx * sy)))
