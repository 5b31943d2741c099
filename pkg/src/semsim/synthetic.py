"""Synthetic paraphrase corpora with a matching synonym-aware embedding table.

Content words come in synonym groups whose vectors are small perturbations
of one concept vector, so the embedding backend rates synonyms as highly
similar.  Function words share a common direction and are listed first in
the table, which puts them close to the general word.

Both classes rewrite a source text with the same surface noise: a few
function words are dropped or inserted and adjacent words are occasionally
transposed.  Positives swap most content words for a synonym.  Negatives
are topic-shuffled: every content word is replaced by a random word of the
same topic, keeping the function-word skeleton.  Only meaning tells the
two classes apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from semsim.corpus import Corpus, Document, Label, ParaphraseCategory, TextPair
from semsim.wordsim import EmbeddingTable

FUNCTION_WORDS = (
    "the", "of", "and", "a", "to", "in", "is", "was", "that", "for",
    "it", "with", "as", "on", "by", "at", "from", "this", "be", "or",
)

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
_CATEGORIES = [c for c in ParaphraseCategory if c is not ParaphraseCategory.UNLABELED]


@dataclass(frozen=True)
class SyntheticConfig:
    n_pairs: int = 200
    positive_fraction: float = 0.5
    topics: int = 4
    concepts_per_topic: int = 50
    synonyms: int = 3
    dimension: int = 64
    synonym_noise: float = 0.25
    function_noise: float = 0.3
    text_length: tuple[int, int] = (16, 26)
    function_share: float = 0.4
    p_synonym: float = 0.7
    p_drop_function: float = 0.15
    p_swap: float = 0.1


@dataclass
class SyntheticData:
    corpus: Corpus
    table: EmbeddingTable

    def write_vectors(self, path: str | Path) -> None:
        rows = [f"{len(self.table)} {self.table.dimension}"]
        for word, vec in zip(self.table.words, self.table.vectors):
            rows.append(word + " " + " ".join(f"{v:.6f}" for v in vec))
        Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")


def _pseudo_words(rng: np.random.Generator, n: int) -> list[str]:
    words: list[str] = []
    seen = set(FUNCTION_WORDS)
    while len(words) < n:
        syllables = rng.integers(2, 4)
        w = "".join(_CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
                    for _ in range(syllables))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def generate(seed: int, config: SyntheticConfig = SyntheticConfig()) -> SyntheticData:
    """Build a labelled corpus and its embedding table from one seed."""
    cfg = config
    rng = np.random.default_rng(seed)
    n_concepts = cfg.topics * cfg.concepts_per_topic
    surface = _pseudo_words(rng, n_concepts * cfg.synonyms)
    # concept c has surface forms groups[c]
    groups = [surface[c * cfg.synonyms:(c + 1) * cfg.synonyms] for c in range(n_concepts)]

    d = cfg.dimension
    common = rng.standard_normal(d)
    common /= np.linalg.norm(common)
    words, vecs = [], []
    for w in FUNCTION_WORDS:
        words.append(w)
        vecs.append(common + cfg.function_noise * rng.standard_normal(d) / np.sqrt(d))
    for forms in groups:
        base = rng.standard_normal(d)
        base /= np.linalg.norm(base)
        for w in forms:
            words.append(w)
            vecs.append(base + cfg.synonym_noise * rng.standard_normal(d) / np.sqrt(d))
    table = EmbeddingTable(words, np.array(vecs))

    def concepts_of(topic: int) -> range:
        return range(topic * cfg.concepts_per_topic, (topic + 1) * cfg.concepts_per_topic)

    def make_text(topic: int) -> list[tuple[str, int]]:
        """Tokens tagged with their concept index (-1 for function words)."""
        length = int(rng.integers(cfg.text_length[0], cfg.text_length[1] + 1))
        pool = list(concepts_of(topic))
        out = []
        for _ in range(length):
            if rng.random() < cfg.function_share:
                out.append((FUNCTION_WORDS[rng.integers(len(FUNCTION_WORDS))], -1))
            else:
                c = pool[rng.integers(len(pool))]
                out.append((groups[c][rng.integers(cfg.synonyms)], c))
        return out

    def rewrite(text: list[tuple[str, int]], topic: int, keep_meaning: bool) -> list[str]:
        pool = list(concepts_of(topic))
        out = []
        for word, c in text:
            if c < 0:
                if rng.random() < cfg.p_drop_function:
                    continue
                out.append(word)
                if rng.random() < cfg.p_drop_function:
                    out.append(FUNCTION_WORDS[rng.integers(len(FUNCTION_WORDS))])
            elif not keep_meaning:
                other = pool[rng.integers(len(pool))]
                out.append(groups[other][rng.integers(cfg.synonyms)])
            elif rng.random() < cfg.p_synonym:
                others = [f for f in groups[c] if f != word]
                out.append(others[rng.integers(len(others))])
            else:
                out.append(word)
        for i in range(len(out) - 1):
            if rng.random() < cfg.p_swap:
                out[i], out[i + 1] = out[i + 1], out[i]
        return out

    n_pos = int(round(cfg.n_pairs * cfg.positive_fraction))
    labels = [True] * n_pos + [False] * (cfg.n_pairs - n_pos)
    rng.shuffle(labels)
    pairs = []
    for i, positive in enumerate(labels):
        topic = int(rng.integers(cfg.topics))
        src = make_text(topic)
        susp = rewrite(src, topic, keep_meaning=positive)
        if positive:
            cat = _CATEGORIES[i % len(_CATEGORIES)]
            label = Label.PLAGIARISM
        else:
            cat = ParaphraseCategory.UNLABELED
            label = Label.NOT_PLAGIARISM
        pairs.append(TextPair(f"syn-{i:04d}", Document(tuple(w for w, _ in src)), Document(tuple(susp)), label, cat))
    return SyntheticData(Corpus(tuple(pairs), f"synthetic-{seed}"), table)
