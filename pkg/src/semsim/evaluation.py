"""Cross-validated evaluation and corpus complexity analysis."""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from semsim.classify import (
    Polarity,
    ThresholdClassifier,
    DecisionTree,
    TREE_FEATURES,
    train_tree,
    tune_threshold,
)
from semsim.corpus import Corpus, Label, TextPair
from semsim.errors import SemsimError
from semsim.measures import PairScores, Rounds, jaccard, score_pair
from semsim.metrics import ConfusionCounts, macro_f1, per_class_f1, spearman
from semsim.wordsim import SimilarityBackend

__all__ = [
    "ConfusionCounts", "macro_f1", "per_class_f1", "spearman", "FoldPlan", "EvalReport",
    "make_folds", "cross_validate", "overlap_sum", "lexical_concordance", "score_corpus",
    "METHODS", "fit_method",
]

METHODS = ("j", "sj", "ed", "sed", "combined")


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------

_worker_state: dict = {}


def _init_worker(backend: SimilarityBackend, rounds: Rounds) -> None:
    _worker_state["backend"] = backend
    _worker_state["rounds"] = rounds


def _score_in_worker(pair: TextPair) -> PairScores:
    return score_pair(pair, _worker_state["backend"], _worker_state["rounds"])


def score_corpus(pairs: Sequence[TextPair], backend: SimilarityBackend, rounds: Rounds = 1,
                 jobs: int = 1) -> list[PairScores]:
    """Score every pair; results are in input order whatever ``jobs`` is."""
    pairs = list(pairs)
    if jobs <= 1 or len(pairs) < 2:
        return [score_pair(p, backend, rounds) for p in pairs]
    chunksize = max(1, len(pairs) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(backend, rounds)) as pool:
        return list(pool.map(_score_in_worker, pairs, chunksize=chunksize))


# ---------------------------------------------------------------------------
# Folds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: dict[str, int]
    seed: int

    def fold_ids(self, fold: int) -> list[str]:
        return [pid for pid, f in self.assignments.items() if f == fold]


def make_folds(corpus: Corpus | Sequence[TextPair], k: int, seed: int) -> FoldPlan:
    """Stratified k-fold plan, deterministic for a fixed seed.

    Each class is shuffled on its own and dealt round-robin; the negatives
    continue where the positives stopped so fold sizes differ by at most one.
    """
    pairs = list(corpus)
    pos = [p.id for p in pairs if p.is_positive]
    neg = [p.id for p in pairs if not p.is_positive]
    if k < 2:
        raise SemsimError(f"need at least 2 folds, got {k}")
    if k > min(len(pos), len(neg)):
        raise SemsimError(f"{k} folds need at least {k} instances of each class "
                          f"(have {len(pos)} positive, {len(neg)} negative)")
    rng = random.Random(seed)
    rng.shuffle(pos)
    rng.shuffle(neg)
    assignments = {}
    for i, pid in enumerate(pos):
        assignments[pid] = i % k
    for i, pid in enumerate(neg, start=len(pos)):
        assignments[pid] = i % k
    # corpus order, so iteration over the plan never depends on the shuffle
    return FoldPlan(k, {p.id: assignments[p.id] for p in pairs}, seed)


# ---------------------------------------------------------------------------
# Cross-validation
# ---------------------------------------------------------------------------


def fit_method(method: str, scores: Sequence[PairScores], labels: Sequence[Label], max_depth: int = 3,
               objective: str = "macro-f1") -> ThresholdClassifier | DecisionTree:
    """Fit the classifier for ``method`` on training scores."""
    if method == "combined":
        feats = [[getattr(s, f) for f in TREE_FEATURES] for s in scores]
        return train_tree(feats, labels, max_depth)
    if method not in METHODS:
        raise SemsimError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    polarity = Polarity.for_feature(method)
    return tune_threshold([(getattr(s, method), lab) for s, lab in zip(scores, labels)],
                          polarity, feature=method, objective=objective)


def _cv_predict(pairs: Sequence[TextPair], scores: Sequence[PairScores], method: str, k: int, seed: int,
                max_depth: int, objective: str) -> tuple[list[Label], list[dict]]:
    plan = make_folds(pairs, k, seed)
    fold_of = [plan.assignments[p.id] for p in pairs]
    preds: list[Label | None] = [None] * len(pairs)
    params = []
    for fold in range(k):
        train = [i for i, f in enumerate(fold_of) if f != fold]
        clf = fit_method(method, [scores[i] for i in train], [pairs[i].label for i in train], max_depth, objective)
        params.append({"fold": fold, **clf.to_dict()})
        for i, f in enumerate(fold_of):
            if f == fold:
                preds[i] = clf.predict(scores[i])
    return preds, params  # type: ignore[return-value]


@dataclass
class EvalReport:
    method: str
    macro_f1: float
    per_class_f1: dict[str, float]
    per_category: dict[str, float | None]
    confusion: ConfusionCounts
    thresholds_used: list[dict]
    fold_count: int
    seed: int
    predictions: dict[str, str] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "macro_f1": self.macro_f1,
            "per_class_f1": dict(self.per_class_f1),
            "per_category": dict(self.per_category),
            "confusion": self.confusion.as_dict(),
            "thresholds_used": self.thresholds_used,
            "fold_count": self.fold_count,
            "seed": self.seed,
        }

    def to_json(self, **extra) -> str:
        return json.dumps({**self.to_dict(), **extra}, indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        c = self.confusion
        lines = [
            f"method     {self.method}",
            f"folds      {self.fold_count} (seed {self.seed})",
            f"macro-F1   {self.macro_f1:.4f}",
            f"F1 plagiarism      {self.per_class_f1['plagiarism']:.4f}",
            f"F1 not-plagiarism  {self.per_class_f1['not-plagiarism']:.4f}",
            f"confusion  tp={c.tp} fp={c.fp} tn={c.tn} fn={c.fn}",
        ]
        if self.per_category:
            lines.append("")
            lines.append(f"{'Paraphrase category':<22}{'F1':>8}")
            for cat, value in self.per_category.items():
                shown = "n/a" if value is None else f"{value:.4f}"
                lines.append(f"{cat.capitalize():<22}{shown:>8}")
        return "\n".join(lines) + "\n"


def cross_validate(corpus: Corpus, backend: SimilarityBackend | None, method: str, k: int = 10, seed: int = 42,
                   scores: Sequence[PairScores] | None = None, per_category: str = "retune",
                   rounds: Rounds = 1, jobs: int = 1, max_depth: int = 3,
                   objective: str = "macro-f1") -> EvalReport:
    """k-fold cross-validation of one method.

    Classifiers are fitted on each training split only and the held-out
    predictions are pooled.  ``scores`` may be passed to skip re-scoring.

    Per-category F1 pits the positives of one category against all
    negatives.  ``per_category="retune"`` runs a separate cross-validation
    for each category (folds capped by the category size); ``"global"``
    reuses the pooled predictions of the main run.
    """
    if method not in METHODS:
        raise SemsimError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if per_category not in ("retune", "global"):
        raise SemsimError(f"per_category must be 'retune' or 'global', got {per_category!r}")
    pairs = list(corpus.pairs)
    if scores is None:
        if backend is None:
            raise SemsimError("either a backend or precomputed scores is required")
        scores = score_corpus(pairs, backend, rounds, jobs)
    if len(scores) != len(pairs):
        raise SemsimError("scores and corpus differ in length")

    preds, params = _cv_predict(pairs, scores, method, k, seed, max_depth, objective)
    gold = [p.label for p in pairs]
    confusion = ConfusionCounts.from_labels(gold, preds)
    f1s = per_class_f1(confusion)

    by_category: dict[str, float | None] = {}
    neg_idx = [i for i, p in enumerate(pairs) if not p.is_positive]
    for cat in corpus.categories():
        pos_idx = [i for i, p in enumerate(pairs) if p.is_positive and p.category is cat]
        idx = sorted(pos_idx + neg_idx)
        if per_category == "global":
            c = ConfusionCounts.from_labels([gold[i] for i in idx], [preds[i] for i in idx])
            by_category[cat.value] = macro_f1(c)
            continue
        kc = min(k, len(pos_idx), len(neg_idx))
        if kc < 2:
            # too few positives of this category to cross-validate
            by_category[cat.value] = None
            continue
        sub_pairs = [pairs[i] for i in idx]
        sub_preds, _ = _cv_predict(sub_pairs, [scores[i] for i in idx], method, kc, seed, max_depth, objective)
        c = ConfusionCounts.from_labels([p.label for p in sub_pairs], sub_preds)
        by_category[cat.value] = macro_f1(c)

    return EvalReport(
        method=method,
        macro_f1=macro_f1(confusion),
        per_class_f1={lab.value: f1s[lab] for lab in Label},
        per_category=by_category,
        confusion=confusion,
        thresholds_used=params,
        fold_count=k,
        seed=seed,
        predictions={p.id: lab.value for p, lab in zip(pairs, preds)},
    )


# ---------------------------------------------------------------------------
# Corpus complexity
# ---------------------------------------------------------------------------


def overlap_sum(pairs: Sequence[TextPair]) -> float:
    """Sum of each pair's own source/suspicious Jaccard."""
    return math.fsum(jaccard(p.source, p.suspicious) for p in pairs)


def lexical_concordance(corpus: Corpus | Sequence[TextPair]) -> float:
    """Close to 1 when positives overlap heavily and negatives barely; close to 0 for hard corpora."""
    pairs = list(corpus)
    if not pairs:
        raise SemsimError("lexical concordance of an empty corpus is undefined")
    pos = [p for p in pairs if p.is_positive]
    neg = [p for p in pairs if not p.is_positive]
    return (len(neg) - overlap_sum(neg) + overlap_sum(pos)) / len(pairs)


def category_concordance(corpus: Corpus) -> dict[str, float]:
    """LC of each category's positives together with all negatives."""
    neg = corpus.negatives
    out = {}
    for cat in corpus.categories():
        pos = [p for p in corpus.positives if p.category is cat]
        out[cat.value] = lexical_concordance(pos + neg)
    return out
