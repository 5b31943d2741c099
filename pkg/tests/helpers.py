"""Shared test helpers: a table-driven backend and tiny corpus builders."""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np

from semsim.corpus import Document, Label, ParaphraseCategory, TextPair
from semsim.wordsim import SimilarityBackend


class TableBackend(SimilarityBackend):
    """Backend driven by an explicit similarity table; unlisted pairs are 0."""

    kind = "table"

    def __init__(self, sims: dict[tuple[str, str], float], tau: dict[str, float] | None = None,
                 vocab=None, oov_policy: str = "exact-fallback") -> None:
        super().__init__(oov_policy)
        self.sims = {}
        for (a, b), v in sims.items():
            self.sims[(a, b)] = v
            self.sims[(b, a)] = v
        self.tau = tau or {}
        words = {w for pair in sims for w in pair} | set(self.tau)
        self.vocab = set(vocab) if vocab is not None else words

    def knows(self, word: str) -> bool:
        return word in self.vocab

    def _known_sim(self, x: str, y: str) -> float:
        return self.sims.get((x, y), 0.0)

    def _known_tau_sim(self, x: str) -> float:
        return 1.0 - self.tau.get(x, 1.0)


def random_table_backend(rng: np.random.Generator, alphabet, tau_range=(0.0, 1.0)) -> TableBackend:
    sims = {}
    for i, a in enumerate(alphabet):
        for b in alphabet[i + 1:]:
            sims[(a, b)] = float(rng.random())
    tau = {a: float(rng.uniform(*tau_range)) for a in alphabet}
    return TableBackend(sims, tau, vocab=alphabet)


def doc(text: str) -> Document:
    return Document(tuple(text.split()))


def pair(pid: str, a: str, b: str, positive: bool,
         category: ParaphraseCategory = ParaphraseCategory.UNLABELED) -> TextPair:
    label = Label.PLAGIARISM if positive else Label.NOT_PLAGIARISM
    return TextPair(pid, doc(a), doc(b), label, category)


def write_pairs_tsv(path: Path, rows) -> Path:
    lines = ["id\tlabel\tcategory\tsource_text\tsuspicious_text"]
    lines += ["\t".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def random_dag(rng: random.Random, n: int):
    """Nodes n0..n{n-1}; n0 is the root, each later node gets 1-3 earlier parents."""
    parents = {"n0": set()}
    for i in range(1, n):
        k = rng.randint(1, min(3, i))
        parents[f"n{i}"] = {f"n{j}" for j in rng.sample(range(i), k)}
    return parents


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LOG: list[str] = []
