"""Semantically-informed Jaccard and edit-distance measures for paraphrase plagiarism."""

from semsim.corpus import (
    Corpus,
    Document,
    Label,
    ParaphraseCategory,
    TextPair,
    TokenizerConfig,
    class_balance,
    dump_corpus,
    load_corpus,
    tokenize,
)
from semsim.errors import ClassifierError, CorpusError, MeasureError, ResourceError, SemsimError
from semsim.measures import (
    PairScores,
    SoftMatchResult,
    jaccard,
    levenshtein,
    score_pair,
    semantic_edit_distance,
    semantic_jaccard,
    softmatch,
)
from semsim.wordsim import (
    EmbeddingBackend,
    EmbeddingTable,
    ExactMatchBackend,
    SimilarityBackend,
    Taxonomy,
    WupBackend,
    coverage,
    load_embeddings,
    load_taxonomy,
)

__version__ = "0.1.0"
