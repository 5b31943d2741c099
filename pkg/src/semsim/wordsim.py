"""Word-pair similarity backends.

Every backend answers three questions about tokens:

* ``sim(x, y)`` in [0, 1], symmetric,
* ``dist(x, y) = 1 - sim(x, y)``,
* ``tau_dist(x)``, the distance of ``x`` to a designated general word.
  Cheap for function words, close to 1 for rare ones; the edit distance
  uses it as the insertion/deletion cost.

Three kinds are provided: exact string match, cosine over a word-vector
table, and Wu-Palmer similarity over a small taxonomy.
"""

from __future__ import annotations

import abc
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from semsim.corpus import Corpus
from semsim.errors import ResourceError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

OOV_POLICIES = ("exact-fallback", "zero")


class SimilarityBackend(abc.ABC):
    """Common contract; subclasses supply similarity for known, distinct words.

    ``oov_policy`` decides pairs where either word is unknown:
    ``exact-fallback`` gives 1 iff the words are equal, ``zero`` gives 0.
    Unknown words always sit at distance 1 from the general word.
    """

    kind: str = "abstract"

    def __init__(self, oov_policy: str = "exact-fallback") -> None:
        if oov_policy not in OOV_POLICIES:
            raise ValueError(f"unknown OOV policy {oov_policy!r}")
        self.oov_policy = oov_policy
        # plain dict: values are deterministic, so concurrent fills are harmless
        self._tau_cache: dict[str, float] = {}

    @abc.abstractmethod
    def knows(self, word: str) -> bool:
        ...

    @abc.abstractmethod
    def _known_sim(self, x: str, y: str) -> float:
        """Raw similarity of two known, distinct words (clamped by the caller)."""

    @abc.abstractmethod
    def _known_tau_sim(self, x: str) -> float:
        """Raw similarity of a known word to the general word."""

    def sim(self, x: str, y: str) -> float:
        if not (self.knows(x) and self.knows(y)):
            if self.oov_policy == "zero":
                return 0.0
            return 1.0 if x == y else 0.0
        if x == y:
            return 1.0
        return _clamp(self._known_sim(x, y))

    def dist(self, x: str, y: str) -> float:
        return 1.0 - self.sim(x, y)

    def tau_dist(self, x: str) -> float:
        try:
            return self._tau_cache[x]
        except KeyError:
            pass
        value = 1.0 - _clamp(self._known_tau_sim(x)) if self.knows(x) else 1.0
        self._tau_cache[x] = value
        return value

    def sim_matrix(self, xs: Sequence[str], ys: Sequence[str]) -> np.ndarray:
        """``len(xs) x len(ys)`` matrix of ``sim``; subclasses may vectorize."""
        out = np.empty((len(xs), len(ys)), dtype=np.float64)
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                out[i, j] = self.sim(x, y)
        return out

    def describe(self) -> dict:
        return {"kind": self.kind, "oov_policy": self.oov_policy}


def _clamp(value: float) -> float:
    if value <= 0.0 or math.isnan(value):
        return 0.0
    if value >= 1.0:
        return 1.0
    return float(value)


class ExactMatchBackend(SimilarityBackend):
    """sim is 1 for identical strings and 0 otherwise; every indel costs 1.

    With this backend the semantic measures reduce to plain Jaccard and
    Levenshtein.
    """

    kind = "exact"

    def knows(self, word: str) -> bool:
        return True

    def _known_sim(self, x: str, y: str) -> float:
        return 0.0

    def _known_tau_sim(self, x: str) -> float:
        # the general word is a reserved token that never occurs in a document
        return 0.0

    def sim_matrix(self, xs: Sequence[str], ys: Sequence[str]) -> np.ndarray:
        return np.array([[1.0 if x == y else 0.0 for y in ys] for x in xs], dtype=np.float64).reshape(len(xs), len(ys))


# ---------------------------------------------------------------------------
# Word vectors
# ---------------------------------------------------------------------------


@dataclass
class EmbeddingTable:
    """Word vectors in file order (word2vec files list frequent words first)."""

    words: list[str]
    vectors: np.ndarray
    duplicates: int = 0
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if not self.words:
            raise ResourceError("embedding table has no entries")
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.words):
            raise ResourceError("embedding vectors must be a (words x dimension) matrix")
        if self.vectors.shape[1] < 1:
            raise ResourceError("embedding dimension must be positive")
        if not np.all(np.isfinite(self.vectors)):
            raise ResourceError("embedding table contains NaN or infinite components")
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ResourceError("embedding table words must be distinct")

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    @classmethod
    def from_dict(cls, entries: Mapping[str, Sequence[float]]) -> "EmbeddingTable":
        words = list(entries)
        return cls(words, np.array([entries[w] for w in words], dtype=np.float64))


def load_embeddings(path: PathLike) -> EmbeddingTable:
    """Read a textual word-vector file (``count dim`` header, then ``word v1 .. vd``).

    A word listed twice keeps its first position and its last vector; the
    number of such repeats is stored in ``EmbeddingTable.duplicates``.
    """
    path = Path(path)
    try:
        fh = open(path, "r", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ResourceError(f"cannot read vectors {str(path)!r}: {exc.strerror}") from exc
    with fh:
        try:
            header = fh.readline().split()
            if len(header) != 2:
                raise ResourceError(f"{path}:1: header must be '<count> <dimension>'")
            try:
                count, dim = int(header[0]), int(header[1])
            except ValueError:
                raise ResourceError(f"{path}:1: header must be two integers") from None
            if dim <= 0:
                raise ResourceError(f"{path}:1: dimension must be positive")
            rows: dict[str, list[float]] = {}
            duplicates = 0
            for lineno, line in enumerate(fh, start=2):
                parts = line.rstrip("\r\n").rstrip(" ").split(" ")
                if parts == [""]:
                    continue
                word, values = parts[0], parts[1:]
                if len(values) != dim:
                    raise ResourceError(f"{path}:{lineno}: expected {dim} components, got {len(values)}")
                try:
                    vec = [float(v) for v in values]
                except ValueError:
                    raise ResourceError(f"{path}:{lineno}: unparsable float in row for {word!r}") from None
                if not all(math.isfinite(v) for v in vec):
                    raise ResourceError(f"{path}:{lineno}: non-finite component in row for {word!r}")
                if word in rows:
                    duplicates += 1
                rows[word] = vec
        except UnicodeDecodeError as exc:
            raise ResourceError(f"{path}: invalid UTF-8") from exc
    if not rows:
        raise ResourceError(f"{path}: no vectors")
    if duplicates:
        logger.warning("%s: %d duplicate words, last occurrence kept", path, duplicates)
    if count != len(rows) + duplicates:
        logger.warning("%s: header announces %d rows, found %d", path, count, len(rows) + duplicates)
    words = list(rows)
    return EmbeddingTable(words, np.array([rows[w] for w in words], dtype=np.float64), duplicates)


class EmbeddingBackend(SimilarityBackend):
    """Cosine similarity over word vectors, negative cosines clamped to 0.

    The general word is the centroid of the unit vectors of the first
    ``tau_topk`` words of the table.
    """

    kind = "embedding"

    def __init__(self, table: EmbeddingTable, tau_topk: int = 100, oov_policy: str = "exact-fallback") -> None:
        super().__init__(oov_policy)
        if tau_topk < 1:
            raise ValueError("tau_topk must be >= 1")
        self.table = table
        self.tau_topk = tau_topk
        norms = np.linalg.norm(table.vectors, axis=1, keepdims=True)
        self._unit = np.divide(table.vectors, norms, out=np.zeros_like(table.vectors), where=norms > 0)
        centroid = self._unit[:tau_topk].mean(axis=0)
        norm = float(np.linalg.norm(centroid))
        self._tau = centroid / norm if norm > 0 else centroid
        self._tau_sims = self._unit @ self._tau

    def knows(self, word: str) -> bool:
        return word in self.table.index

    def _known_sim(self, x: str, y: str) -> float:
        idx = self.table.index
        return float(self._unit[idx[x]] @ self._unit[idx[y]])

    def _known_tau_sim(self, x: str) -> float:
        return float(self._tau_sims[self.table.index[x]])

    def sim_matrix(self, xs: Sequence[str], ys: Sequence[str]) -> np.ndarray:
        idx = self.table.index
        out = np.zeros((len(xs), len(ys)), dtype=np.float64)
        kx = [i for i, x in enumerate(xs) if x in idx]
        ky = [j for j, y in enumerate(ys) if y in idx]
        if kx and ky:
            ux = self._unit[[idx[xs[i]] for i in kx]]
            uy = self._unit[[idx[ys[j]] for j in ky]]
            # row-by-row dot products so each entry matches _known_sim bit for bit
            block = np.array([[float(a @ b) for b in uy] for a in ux])
            out[np.ix_(kx, ky)] = np.clip(block, 0.0, 1.0)
        eq = np.array([[x == y for y in ys] for x in xs], dtype=bool).reshape(len(xs), len(ys))
        if self.oov_policy == "exact-fallback":
            out[eq] = 1.0
        else:
            known_x = np.array([x in idx for x in xs], dtype=bool)
            out[eq & known_x[:, None]] = 1.0
        return out

    def describe(self) -> dict:
        return {**super().describe(), "tau_topk": self.tau_topk,
                "dimension": self.table.dimension, "entries": len(self.table)}


# ---------------------------------------------------------------------------
# Taxonomy / Wu-Palmer
# ---------------------------------------------------------------------------


class Taxonomy:
    """A rooted DAG of synsets plus a word -> synsets lexicon.

    Depths count nodes on the shortest path to the root, so the root has
    depth 1 and a synset with several parents takes the shallowest route.
    """

    def __init__(self, parents: Mapping[str, Iterable[str]], lexicon: Mapping[str, Iterable[str]]) -> None:
        nodes: set[str] = set()
        par: dict[str, frozenset[str]] = {}
        for child, ps in parents.items():
            ps = frozenset(ps)
            par[child] = ps
            nodes.add(child)
            nodes |= ps
        for n in nodes:
            par.setdefault(n, frozenset())
        if not nodes:
            raise ResourceError("taxonomy has no nodes")
        for word, synsets in lexicon.items():
            for s in synsets:
                if s not in nodes:
                    raise ResourceError(f"word {word!r} refers to unknown synset {s!r}")
        roots = sorted(n for n in nodes if not par[n])
        if len(roots) != 1:
            raise ResourceError(f"taxonomy must have exactly one root, found {roots[:5]}")
        self.nodes = frozenset(nodes)
        self.parents = par
        self.root = roots[0]
        self.lexicon = {w: tuple(sorted(set(s))) for w, s in lexicon.items()}
        _check_acyclic(par)
        self.children: dict[str, list[str]] = {n: [] for n in nodes}
        for c, ps in par.items():
            for p in ps:
                self.children[p].append(c)
        self.depth = self._compute_depths()
        self._ancestors: dict[str, frozenset[str]] = {}

    def _compute_depths(self) -> dict[str, int]:
        depth = {self.root: 1}
        queue = deque([self.root])
        while queue:
            node = queue.popleft()
            for child in sorted(self.children[node]):
                if child not in depth:
                    depth[child] = depth[node] + 1
                    queue.append(child)
        return depth

    def ancestors(self, synset: str) -> frozenset[str]:
        """All ancestors of ``synset``, itself included."""
        cached = self._ancestors.get(synset)
        if cached is not None:
            return cached
        result = {synset}
        stack = list(self.parents[synset])
        while stack:
            n = stack.pop()
            if n not in result:
                result.add(n)
                stack.extend(self.parents[n])
        frozen = frozenset(result)
        self._ancestors[synset] = frozen
        return frozen

    def wup(self, a: str, b: str) -> float:
        """Wu-Palmer similarity of two synsets, capped at 1."""
        common = self.ancestors(a) & self.ancestors(b)
        deepest = max(self.depth[c] for c in common)
        # a deep ancestor reached through a long side path can push this above 1
        return min(1.0, 2.0 * deepest / (self.depth[a] + self.depth[b]))

    def synsets(self, word: str) -> tuple[str, ...]:
        return self.lexicon.get(word, ())


def _check_acyclic(parents: Mapping[str, frozenset[str]]) -> None:
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {n: WHITE for n in parents}
    for start in sorted(parents):
        if colour[start] != WHITE:
            continue
        colour[start] = GREY
        stack = [(start, iter(sorted(parents[start])))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
            elif colour[nxt] == GREY:
                raise ResourceError(f"taxonomy has a cycle through {nxt!r}")
            elif colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(sorted(parents[nxt]))))


def load_taxonomy(path: PathLike) -> Taxonomy:
    """Read ``edge<TAB>child<TAB>parent`` and ``word<TAB>word<TAB>synset`` records.

    Blank lines and lines starting with ``#`` are ignored.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read taxonomy {str(path)!r}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ResourceError(f"{path}: invalid UTF-8") from exc
    parents: dict[str, set[str]] = {}
    lexicon: dict[str, set[str]] = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3 or cols[0] not in ("edge", "word"):
            raise ResourceError(f"{path}:{lineno}: expected 'edge' or 'word' record with 3 tab-separated fields")
        kind, a, b = cols
        if kind == "edge":
            if a == b:
                raise ResourceError(f"taxonomy has a cycle through {a!r}")
            parents.setdefault(a, set()).add(b)
            parents.setdefault(b, set())
        else:
            lexicon.setdefault(a, set()).add(b)
    return Taxonomy(parents, lexicon)


class WupBackend(SimilarityBackend):
    """Wu-Palmer similarity, maximised over all synset pairs of the two words.

    The general word is the synset ``tau``; by default the root's only
    child, or the root itself when it has several children.
    """

    kind = "wup"

    def __init__(self, taxonomy: Taxonomy, tau: str | None = None, oov_policy: str = "exact-fallback") -> None:
        super().__init__(oov_policy)
        self.taxonomy = taxonomy
        if tau is None:
            kids = taxonomy.children[taxonomy.root]
            tau = kids[0] if len(kids) == 1 else taxonomy.root
        if tau not in taxonomy.nodes:
            raise ResourceError(f"general synset {tau!r} is not in the taxonomy")
        self.tau = tau

    def knows(self, word: str) -> bool:
        return bool(self.taxonomy.synsets(word))

    def _known_sim(self, x: str, y: str) -> float:
        tx = self.taxonomy
        return max(tx.wup(a, b) for a in tx.synsets(x) for b in tx.synsets(y))

    def _known_tau_sim(self, x: str) -> float:
        tx = self.taxonomy
        return max(tx.wup(self.tau, s) for s in tx.synsets(x))

    def describe(self) -> dict:
        return {**super().describe(), "tau": self.tau, "synsets": len(self.taxonomy.nodes)}


def coverage(backend: SimilarityBackend, corpus: Corpus) -> float:
    """Fraction of the corpus vocabulary the backend knows."""
    vocab = corpus.vocabulary()
    if not vocab:
        return 0.0
    return sum(1 for w in vocab if backend.knows(w)) / len(vocab)
