"""Turning scores into Plagiarism / NotPlagiarism decisions.

Two classifiers: a tuned threshold on one measure, and a small CART tree
over the (sj, sed) pair of features.  Both round-trip through JSON.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from semsim.corpus import Label
from semsim.errors import ClassifierError
from semsim.measures import PairScores
from semsim.metrics import ConfusionCounts, accuracy, macro_f1

FEATURES = ("j", "sj", "ed", "sed")
TREE_FEATURES = ("sj", "sed")
OBJECTIVES = {"macro-f1": macro_f1, "accuracy": accuracy}


class Polarity(enum.Enum):
    HIGH_IS_POSITIVE = "high-is-positive"
    LOW_IS_POSITIVE = "low-is-positive"

    @classmethod
    def for_feature(cls, feature: str) -> "Polarity":
        return cls.LOW_IS_POSITIVE if feature in ("ed", "sed") else cls.HIGH_IS_POSITIVE


@dataclass(frozen=True)
class ThresholdClassifier:
    feature: str
    polarity: Polarity
    threshold: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ClassifierError(f"threshold {self.threshold} outside [0, 1]")

    def predict_value(self, value: float) -> Label:
        above = value > self.threshold
        if self.polarity is Polarity.HIGH_IS_POSITIVE:
            return Label.PLAGIARISM if above else Label.NOT_PLAGIARISM
        return Label.NOT_PLAGIARISM if above else Label.PLAGIARISM

    def predict(self, scores: PairScores) -> Label:
        return self.predict_value(getattr(scores, self.feature))

    def to_dict(self) -> dict:
        return {"type": "threshold", "feature": self.feature,
                "polarity": self.polarity.value, "threshold": self.threshold}


def classify_threshold(clf: ThresholdClassifier, scores: PairScores) -> Label:
    return clf.predict(scores)


def threshold_candidates(values: Sequence[float]) -> list[float]:
    """Midpoints between consecutive distinct values, plus 0 and 1, ascending."""
    distinct = sorted(set(float(v) for v in values))
    mids = [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]
    return sorted(set([0.0, 1.0] + [m for m in mids if 0.0 <= m <= 1.0]))


def tune_threshold(scores: Sequence[tuple[float, Label]], polarity: Polarity, feature: str = "score",
                   objective: str = "macro-f1") -> ThresholdClassifier:
    """Pick the threshold that maximises the training objective.

    Ties go to the smallest threshold.

    Raises:
        ClassifierError: if the scores do not contain both labels.
    """
    labels = {lab for _, lab in scores}
    if labels != {Label.PLAGIARISM, Label.NOT_PLAGIARISM}:
        raise ClassifierError("threshold tuning needs both labels in the training data")
    metric = OBJECTIVES[objective]
    values = np.array([float(s) for s, _ in scores])
    is_pos = np.array([lab is Label.PLAGIARISM for _, lab in scores])
    pos_sorted = np.sort(values[is_pos])
    neg_sorted = np.sort(values[~is_pos])
    n_pos, n_neg = len(pos_sorted), len(neg_sorted)

    best_t, best_score = None, -1.0
    for t in threshold_candidates(values):
        pos_above = n_pos - int(np.searchsorted(pos_sorted, t, side="right"))
        neg_above = n_neg - int(np.searchsorted(neg_sorted, t, side="right"))
        if polarity is Polarity.HIGH_IS_POSITIVE:
            c = ConfusionCounts(tp=pos_above, fp=neg_above, tn=n_neg - neg_above, fn=n_pos - pos_above)
        else:
            c = ConfusionCounts(tp=n_pos - pos_above, fp=n_neg - neg_above, tn=neg_above, fn=pos_above)
        score = metric(c)
        if score > best_score:
            best_t, best_score = t, score
    return ThresholdClassifier(feature, polarity, best_t)


# ---------------------------------------------------------------------------
# Decision tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    label: Label


@dataclass(frozen=True)
class Split:
    feature: int
    value: float
    left: "Node"
    right: "Node"


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class DecisionTree:
    root: Node
    max_depth: int
    feature_names: tuple[str, ...] = TREE_FEATURES

    def predict_features(self, features: Sequence[float]) -> Label:
        node = self.root
        while isinstance(node, Split):
            node = node.left if features[node.feature] <= node.value else node.right
        return node.label

    def predict(self, scores: PairScores) -> Label:
        return self.predict_features([getattr(scores, f) for f in self.feature_names])

    def depth(self) -> int:
        def walk(node: Node) -> int:
            return 0 if isinstance(node, Leaf) else 1 + max(walk(node.left), walk(node.right))
        return walk(self.root)

    def to_dict(self) -> dict:
        def enc(node: Node) -> dict:
            if isinstance(node, Leaf):
                return {"label": node.label.value}
            return {"feature": self.feature_names[node.feature], "value": node.value,
                    "left": enc(node.left), "right": enc(node.right)}
        return {"type": "tree", "features": list(self.feature_names),
                "max_depth": self.max_depth, "root": enc(self.root)}


def classify_tree(tree: DecisionTree, features: Sequence[float]) -> Label:
    return tree.predict_features(features)


def _gini(pos: int, n: int) -> float:
    if n == 0:
        return 0.0
    p = pos / n
    return 2.0 * p * (1.0 - p)


def _majority(pos: int, n: int) -> Label:
    # ties favour the majority class of the corpora, NotPlagiarism
    return Label.PLAGIARISM if 2 * pos > n else Label.NOT_PLAGIARISM


def _best_split(X: np.ndarray, y: np.ndarray) -> tuple[int, float, float] | None:
    """Lowest weighted child Gini over all features and midpoints, or None."""
    n = len(y)
    best = None
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        cum_pos = np.cumsum(ys)
        total_pos = int(cum_pos[-1])
        for i in range(n - 1):
            if xs[i] == xs[i + 1]:
                continue
            nl = i + 1
            pl = int(cum_pos[i])
            impurity = (nl * _gini(pl, nl) + (n - nl) * _gini(total_pos - pl, n - nl)) / n
            if best is None or impurity < best[2]:
                best = (f, float((xs[i] + xs[i + 1]) / 2), impurity)
    return best


def train_tree(features: Sequence[Sequence[float]], labels: Sequence[Label], max_depth: int = 3,
               feature_names: Sequence[str] = TREE_FEATURES) -> DecisionTree:
    """Greedy top-down Gini tree; no pruning, depth capped at ``max_depth``."""
    if len(features) == 0:
        raise ClassifierError("cannot train a tree on empty data")
    if max_depth < 1:
        raise ClassifierError("max_depth must be >= 1")
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(feature_names):
        raise ClassifierError(f"expected {len(feature_names)} features per instance")
    y = np.array([lab is Label.PLAGIARISM for lab in labels], dtype=np.int64)
    if len(y) != len(X):
        raise ClassifierError("features and labels differ in length")

    def grow(idx: np.ndarray, depth: int) -> Node:
        n, pos = len(idx), int(y[idx].sum())
        parent = _gini(pos, n)
        if pos == 0 or pos == n or depth == max_depth:
            return Leaf(_majority(pos, n))
        split = _best_split(X[idx], y[idx])
        if split is None or split[2] >= parent - 1e-12:
            return Leaf(_majority(pos, n))
        f, value, _ = split
        go_left = X[idx, f] <= value
        return Split(f, value, grow(idx[go_left], depth + 1), grow(idx[~go_left], depth + 1))

    return DecisionTree(grow(np.arange(len(y)), 0), max_depth, tuple(feature_names))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

Classifier = Union[ThresholdClassifier, DecisionTree]


def classifier_to_json(clf: Classifier, **extra) -> str:
    doc = {**clf.to_dict(), **extra}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def classifier_from_dict(doc: dict) -> Classifier:
    try:
        kind = doc["type"]
        if kind == "threshold":
            feature = doc["feature"]
            if feature not in FEATURES:
                raise ClassifierError(f"unknown feature {feature!r} in classifier")
            return ThresholdClassifier(feature, Polarity(doc["polarity"]), float(doc["threshold"]))
        if kind == "tree":
            names = tuple(doc["features"])
            if any(n not in FEATURES for n in names):
                raise ClassifierError(f"unknown feature in tree: {names}")

            def dec(node: dict) -> Node:
                if "label" in node:
                    return Leaf(Label(node["label"]))
                return Split(names.index(node["feature"]), float(node["value"]), dec(node["left"]), dec(node["right"]))

            return DecisionTree(dec(doc["root"]), int(doc["max_depth"]), names)
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, ClassifierError):
            raise
        raise ClassifierError(f"malformed classifier document: {exc}") from exc
    raise ClassifierError(f"unknown classifier type {kind!r}")
