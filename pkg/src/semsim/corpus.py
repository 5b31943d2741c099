"""Pair corpora: tokenization, typed instances and the two on-disk formats.

``pairs-tsv`` is the canonical format::

    id<TAB>label<TAB>category<TAB>source_text<TAB>suspicious_text

with one header line.  ``msrp-tsv`` is the native Microsoft Research
Paraphrase layout (``quality, id1, id2, string1, string2``), read only.
"""

from __future__ import annotations

import enum
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

from semsim.errors import CorpusError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# alphanumeric runs: \w without the underscore
_TOKEN_RE = re.compile(r"[^\W_]+")


class Label(enum.Enum):
    PLAGIARISM = "plagiarism"
    NOT_PLAGIARISM = "not-plagiarism"

    @classmethod
    def parse(cls, value: str) -> "Label":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise CorpusError(f"unknown label {value!r}") from None


class ParaphraseCategory(enum.Enum):
    MORPHOLOGICAL = "morphological"
    LEXICAL = "lexical"
    SYNTACTICAL = "syntactical"
    DISCOURSE = "discourse"
    SEMANTIC = "semantic"
    MISCELLANEOUS = "miscellaneous"
    UNLABELED = "unlabeled"

    @classmethod
    def parse(cls, value: str) -> "ParaphraseCategory":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise CorpusError(f"unknown paraphrase category {value!r}") from None


@dataclass(frozen=True)
class TokenizerConfig:
    casefold: bool = True


@dataclass(frozen=True)
class Document:
    """An ordered token sequence together with its vocabulary."""

    tokens: tuple[str, ...]
    vocab: frozenset[str] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "vocab", frozenset(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def text(self) -> str:
        return " ".join(self.tokens)


def tokenize(raw: str, config: TokenizerConfig = TokenizerConfig()) -> Document:
    """Split ``raw`` into maximal alphanumeric runs; punctuation is dropped.

    >>> tokenize("The question, linked.").tokens
    ('the', 'question', 'linked')
    """
    if config.casefold:
        raw = raw.casefold()
    return Document(tuple(_TOKEN_RE.findall(raw)))


@dataclass(frozen=True)
class TextPair:
    id: str
    source: Document
    suspicious: Document
    label: Label
    category: ParaphraseCategory = ParaphraseCategory.UNLABELED

    @property
    def is_positive(self) -> bool:
        return self.label is Label.PLAGIARISM


@dataclass(frozen=True)
class Corpus:
    pairs: tuple[TextPair, ...]
    name: str = "corpus"

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if not self.pairs:
            raise CorpusError(f"corpus {self.name!r} has no pairs")
        seen: set[str] = set()
        for pair in self.pairs:
            if pair.id in seen:
                raise CorpusError(f"duplicate pair id {pair.id!r}")
            seen.add(pair.id)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def positives(self) -> list[TextPair]:
        return [p for p in self.pairs if p.is_positive]

    @property
    def negatives(self) -> list[TextPair]:
        return [p for p in self.pairs if not p.is_positive]

    def categories(self) -> list[ParaphraseCategory]:
        """Categories carried by positive pairs, in enum order, Unlabeled excluded."""
        present = {p.category for p in self.positives}
        return [c for c in ParaphraseCategory if c in present and c is not ParaphraseCategory.UNLABELED]

    def vocabulary(self) -> set[str]:
        vocab: set[str] = set()
        for p in self.pairs:
            vocab |= p.source.vocab
            vocab |= p.suspicious.vocab
        return vocab

    def counts(self) -> dict[str, object]:
        per_category = Counter(p.category.value for p in self.positives)
        return {
            "pairs": len(self.pairs),
            "positives": len(self.positives),
            "negatives": len(self.negatives),
            "per_category": dict(sorted(per_category.items())),
        }

    def subset(self, pairs: Iterable[TextPair], name: str | None = None) -> "Corpus":
        return Corpus(tuple(pairs), name or self.name)


def class_balance(corpus: Corpus) -> float:
    """Fraction of pairs labelled Plagiarism."""
    return len(corpus.positives) / len(corpus.pairs)


def _read_lines(path: Path) -> list[str]:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {str(path)!r}: {exc.strerror}") from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{path}: invalid UTF-8 at byte {exc.start}") from exc
    return text.split("\n")


def _make_pair(path: Path, lineno: int, pair_id: str, label: Label,
               category: ParaphraseCategory, source: str, suspicious: str,
               config: TokenizerConfig) -> TextPair:
    src_doc = tokenize(source, config)
    susp_doc = tokenize(suspicious, config)
    for which, doc in (("source", src_doc), ("suspicious", susp_doc)):
        if not doc.tokens:
            raise CorpusError(f"{path}:{lineno}: pair {pair_id!r} has empty {which} text after tokenization")
    return TextPair(pair_id, src_doc, susp_doc, label, category)


def _parse_pairs_tsv(path: Path, lines: Sequence[str], config: TokenizerConfig) -> list[TextPair]:
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            raise CorpusError(f"{path}:{lineno}: expected 5 tab-separated columns, got {len(cols)}")
        pair_id, label, category, source, suspicious = cols
        try:
            lab = Label.parse(label)
            cat = ParaphraseCategory.parse(category)
        except CorpusError as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from None
        pairs.append(_make_pair(path, lineno, pair_id, lab, cat, source, suspicious, config))
    return pairs


def _parse_msrp_tsv(path: Path, lines: Sequence[str], config: TokenizerConfig) -> list[TextPair]:
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.rstrip("\r").split("\t")
        if len(cols) != 5:
            raise CorpusError(f"{path}:{lineno}: expected 5 tab-separated columns, got {len(cols)}")
        quality, id1, id2, s1, s2 = cols
        if quality.strip() == "1":
            lab = Label.PLAGIARISM
        elif quality.strip() == "0":
            lab = Label.NOT_PLAGIARISM
        else:
            raise CorpusError(f"{path}:{lineno}: unknown MSRP quality {quality!r}")
        pair_id = f"{id1.strip()}-{id2.strip()}"
        pairs.append(_make_pair(path, lineno, pair_id, lab, ParaphraseCategory.UNLABELED, s1, s2, config))
    return pairs


FORMATS = ("pairs-tsv", "msrp-tsv")


def load_corpus(path: PathLike, format: str = "pairs-tsv",
                config: TokenizerConfig = TokenizerConfig(), name: str | None = None) -> Corpus:
    """Read a pair corpus from disk.

    Raises:
        CorpusError: on malformed rows (with line number), unknown labels or
            categories, texts that tokenize to nothing, duplicate ids, or an
            empty file.
    """
    path = Path(path)
    if format == "pairs-tsv":
        parser = _parse_pairs_tsv
    elif format == "msrp-tsv":
        parser = _parse_msrp_tsv
    else:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {', '.join(FORMATS)}")
    lines = _read_lines(path)
    if not lines or not lines[0]:
        raise CorpusError(f"{path}: missing header line")
    pairs = parser(path, lines, config)
    seen: dict[str, int] = {}
    for idx, pair in enumerate(pairs):
        if pair.id in seen:
            raise CorpusError(f"{path}: duplicate pair id {pair.id!r}")
        seen[pair.id] = idx
    corpus = Corpus(tuple(pairs), name or path.stem)
    logger.info("loaded %s: %s", corpus.name, corpus.counts())
    return corpus


PAIRS_TSV_HEADER = "id\tlabel\tcategory\tsource_text\tsuspicious_text"


def dump_corpus(corpus: Corpus, path: PathLike) -> None:
    """Write ``corpus`` as pairs-tsv; documents are stored as space-joined tokens."""
    rows = [PAIRS_TSV_HEADER]
    for p in corpus.pairs:
        rows.append("\t".join((p.id, p.label.value, p.category.value, p.source.text(), p.suspicious.text())))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")
