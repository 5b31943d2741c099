"""The four pair measures: Jaccard, soft Jaccard, Levenshtein, semantic edit distance.

All measures work on tokenized ``Document`` objects.  Similarities and
distances are in [0, 1]; both edit distances are normalised by the length
of the longer document.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import AbstractSet, Sequence, Union

import numpy as np

from semsim.corpus import Document, TextPair
from semsim.errors import MeasureError
from semsim.wordsim import SimilarityBackend

# ``1`` keeps only first-round mutual bests; ``"iterate"`` re-matches the leftovers
Rounds = Union[int, str]
SOFTMATCH_ROUNDS = ("1", "iterate")


@dataclass(frozen=True)
class SoftMatchResult:
    pairs: tuple[tuple[str, str, float], ...]
    total: float

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class PairScores:
    j: float
    sj: float
    ed: float
    sed: float

    def as_dict(self) -> dict[str, float]:
        return {"j": self.j, "sj": self.sj, "ed": self.ed, "sed": self.sed}


def _check_nonempty(a: Sequence | AbstractSet, b: Sequence | AbstractSet, what: str) -> None:
    if not a and not b:
        raise MeasureError(f"{what} is undefined for two empty documents")


def _check_both_nonempty(xs: Sequence[str], ys: Sequence[str], what: str) -> None:
    # the sequence measures are only defined between two real texts
    if not xs or not ys:
        raise MeasureError(f"{what} needs two non-empty documents")


def jaccard(a: Document, b: Document) -> float:
    _check_nonempty(a.vocab, b.vocab, "jaccard")
    return len(a.vocab & b.vocab) / len(a.vocab | b.vocab)


def softmatch(xs: AbstractSet[str], ys: AbstractSet[str], backend: SimilarityBackend,
              rounds: Rounds = 1) -> SoftMatchResult:
    """Sum the similarities of mutual-best word pairs between ``xs`` and ``ys``.

    A pair (x, y) is kept when sim(x, y) is the largest similarity of x to
    any y and of y to any x, and is positive.  Under ties, candidates are
    taken in order of (similarity desc, x, y) while both words are free.
    With ``rounds="iterate"`` the rule is reapplied to the unmatched words
    until nothing more can be matched.
    """
    if str(rounds) not in SOFTMATCH_ROUNDS:
        raise ValueError(f"rounds must be 1 or 'iterate', got {rounds!r}")
    iterate = str(rounds) == "iterate"
    xl, yl = sorted(xs), sorted(ys)
    if not xl or not yl:
        return SoftMatchResult((), 0.0)
    sims = backend.sim_matrix(xl, yl)
    free_x = np.ones(len(xl), dtype=bool)
    free_y = np.ones(len(yl), dtype=bool)
    kept: list[tuple[str, str, float]] = []
    while free_x.any() and free_y.any():
        masked = np.where(free_x[:, None] & free_y[None, :], sims, -1.0)
        row_best = masked.max(axis=1)
        col_best = masked.max(axis=0)
        cand = (masked > 0.0) & (masked == row_best[:, None]) & (masked == col_best[None, :])
        ii, jj = np.nonzero(cand)
        # index order is lexicographic order because xl and yl are sorted
        order = sorted(zip(ii.tolist(), jj.tolist()), key=lambda ij: (-sims[ij], ij[0], ij[1]))
        accepted = 0
        for i, j in order:
            if free_x[i] and free_y[j]:
                free_x[i] = free_y[j] = False
                kept.append((xl[i], yl[j], float(sims[i, j])))
                accepted += 1
        if not iterate or not accepted:
            break
    # fsum is order independent, which keeps the total symmetric in (xs, ys)
    return SoftMatchResult(tuple(kept), math.fsum(s for _, _, s in kept))


def semantic_jaccard(a: Document, b: Document, backend: SimilarityBackend, rounds: Rounds = 1) -> float:
    """Jaccard with soft-match mass moved from the union into the intersection."""
    _check_nonempty(a.vocab, b.vocab, "semantic_jaccard")
    common = a.vocab & b.vocab
    union = len(a.vocab | b.vocab)
    total = softmatch(a.vocab - common, b.vocab - common, backend, rounds).total
    return (len(common) + total) / (union - total)


def levenshtein(a: Document, b: Document) -> float:
    """Token-level unit-cost edit distance divided by the longer length."""
    _check_both_nonempty(a.tokens, b.tokens, "levenshtein")
    return levenshtein_cost(a.tokens, b.tokens) / max(len(a), len(b))


def levenshtein_cost(xs: Sequence[str], ys: Sequence[str]) -> int:
    prev = list(range(len(ys) + 1))
    for i, x in enumerate(xs, start=1):
        cur = [i]
        for j, y in enumerate(ys, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def semantic_edit_cost(xs: Sequence[str], ys: Sequence[str], backend: SimilarityBackend) -> float:
    """Raw (un-normalised) semantic edit distance between two token sequences.

    Substituting x by y costs dist(x, y), zero for identical tokens; inserting
    or deleting x costs its distance to the general word.
    """
    n, m = len(xs), len(ys)
    del_cost = [backend.tau_dist(x) for x in xs]
    ins_cost = [backend.tau_dist(y) for y in ys]
    if n == 0 or m == 0:
        acc = 0.0
        for c in del_cost or ins_cost:
            acc += c
        return acc
    ux, uy = sorted(set(xs)), sorted(set(ys))
    sims = backend.sim_matrix(ux, uy)
    rx = {w: i for i, w in enumerate(ux)}
    ry = {w: j for j, w in enumerate(uy)}
    col = [ry[y] for y in ys]
    sub_rows = {}
    for x in ux:
        row = (1.0 - sims[rx[x]]).tolist()
        sub_rows[x] = [0.0 if x == y else row[c] for y, c in zip(ys, col)]

    prev = [0.0] * (m + 1)
    for j in range(m):
        prev[j + 1] = prev[j] + ins_cost[j]
    for i in range(n):
        sub = sub_rows[xs[i]]
        d = del_cost[i]
        cur = [prev[0] + d]
        left = cur[0]
        for j in range(m):
            best = prev[j + 1] + d
            alt = left + ins_cost[j]
            if alt < best:
                best = alt
            alt = prev[j] + sub[j]
            if alt < best:
                best = alt
            cur.append(best)
            left = best
        prev = cur
    return prev[m]


def semantic_edit_distance(a: Document, b: Document, backend: SimilarityBackend) -> float:
    _check_both_nonempty(a.tokens, b.tokens, "semantic_edit_distance")
    return semantic_edit_cost(a.tokens, b.tokens, backend) / max(len(a), len(b))


def score_documents(a: Document, b: Document, backend: SimilarityBackend, rounds: Rounds = 1) -> PairScores:
    return PairScores(
        j=jaccard(a, b),
        sj=semantic_jaccard(a, b, backend, rounds),
        ed=levenshtein(a, b),
        sed=semantic_edit_distance(a, b, backend),
    )


def score_pair(pair: TextPair, backend: SimilarityBackend, rounds: Rounds = 1) -> PairScores:
    return score_documents(pair.source, pair.suspicious, backend, rounds)
