"""Command-line entry point: ``semsim {score,evaluate,complexity,tune,apply,coverage}``.

Exit status is 0 on success and 2 on any usage, configuration or data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from semsim.classify import classifier_from_dict, classifier_to_json, DecisionTree
from semsim.corpus import FORMATS, Corpus, TokenizerConfig, class_balance, load_corpus
from semsim.errors import SemsimError
from semsim.evaluation import (
    METHODS,
    category_concordance,
    cross_validate,
    fit_method,
    lexical_concordance,
    score_corpus,
)
from semsim.measures import SOFTMATCH_ROUNDS
from semsim.metrics import ConfusionCounts, macro_f1
from semsim.wordsim import (
    OOV_POLICIES,
    EmbeddingBackend,
    ExactMatchBackend,
    SimilarityBackend,
    WupBackend,
    coverage,
    load_embeddings,
    load_taxonomy,
)

logger = logging.getLogger("semsim")

BACKENDS = ("exact", "embedding", "wup")


class ConfigError(SemsimError):
    pass


@dataclass
class RunConfig:
    command: str
    corpus: str
    format: str = "pairs-tsv"
    casefold: bool = True
    backend: str = "exact"
    vectors: str | None = None
    taxonomy: str | None = None
    tau_topk: int = 100
    tau_synset: str | None = None
    oov: str = "exact-fallback"
    softmatch_rounds: str = "1"
    method: str | None = None
    folds: int = 10
    seed: int = 42
    max_depth: int = 3
    per_category: str = "retune"
    objective: str = "macro-f1"
    model: str | None = None
    out: str | None = None
    report: str = "json"
    jobs: int = 1

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in vars(args).items() if k in fields})

    def validate(self) -> None:
        def need_file(flag: str, value: str | None) -> None:
            if value is None:
                raise ConfigError(f"--{flag} is required")
            if not Path(value).is_file():
                raise ConfigError(f"--{flag}: file not found: {value}")

        need_file("corpus", self.corpus)
        if self.command != "complexity":
            if self.backend == "embedding":
                need_file("vectors", self.vectors)
            elif self.backend == "wup":
                need_file("taxonomy", self.taxonomy)
        if self.command == "apply":
            need_file("model", self.model)
        if self.folds < 2:
            raise ConfigError("--folds must be at least 2")
        if self.tau_topk < 1:
            raise ConfigError("--tau-topk must be positive")
        if self.jobs < 1:
            raise ConfigError("--jobs must be positive")
        if self.max_depth < 1:
            raise ConfigError("--max-depth must be positive")

    def serialized(self) -> dict:
        """The settings that determine results; output locations and --jobs are left out."""
        doc = asdict(self)
        for key in ("out", "report", "jobs", "command"):
            doc.pop(key)
        return doc

    @property
    def rounds(self) -> int | str:
        return 1 if self.softmatch_rounds == "1" else "iterate"


def build_backend(cfg: RunConfig) -> SimilarityBackend:
    if cfg.backend == "exact":
        return ExactMatchBackend(cfg.oov)
    if cfg.backend == "embedding":
        return EmbeddingBackend(load_embeddings(cfg.vectors), tau_topk=cfg.tau_topk, oov_policy=cfg.oov)
    return WupBackend(load_taxonomy(cfg.taxonomy), tau=cfg.tau_synset, oov_policy=cfg.oov)


def _load(cfg: RunConfig) -> Corpus:
    return load_corpus(cfg.corpus, cfg.format, TokenizerConfig(casefold=cfg.casefold))


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def cmd_score(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    backend = build_backend(cfg)
    scores = score_corpus(corpus.pairs, backend, cfg.rounds, cfg.jobs)
    records = [{"id": p.id, **s.as_dict()} for p, s in zip(corpus.pairs, scores)]
    if cfg.report == "json":
        _emit(cfg, _dump({"config": cfg.serialized(), "records": records}))
    else:
        rows = ["id\tj\tsj\ted\tsed"]
        rows += [f"{r['id']}\t{r['j']!r}\t{r['sj']!r}\t{r['ed']!r}\t{r['sed']!r}" for r in records]
        _emit(cfg, "\n".join(rows) + "\n")
    return 0


def cmd_evaluate(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    backend = build_backend(cfg)
    report = cross_validate(corpus, backend, cfg.method, k=cfg.folds, seed=cfg.seed,
                            per_category=cfg.per_category, rounds=cfg.rounds, jobs=cfg.jobs,
                            max_depth=cfg.max_depth, objective=cfg.objective)
    if cfg.report == "json":
        _emit(cfg, report.to_json(config=cfg.serialized()))
    else:
        _emit(cfg, report.to_table())
    if cfg.out is not None:
        print(f"macro-F1 {report.macro_f1:.4f}")
    return 0


def cmd_complexity(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    lc = lexical_concordance(corpus)
    per_cat = category_concordance(corpus)
    if cfg.report == "json":
        _emit(cfg, _dump({"config": cfg.serialized(), "corpus": corpus.name, "pairs": len(corpus),
                          "class_balance": class_balance(corpus), "lexical_concordance": lc,
                          "per_category": per_cat}))
    else:
        lines = [f"{'Corpus':<22}{'LC value':>10}", f"{corpus.name:<22}{lc:>10.4f}"]
        if per_cat:
            lines.append(f"{'Paraphrase type':<22}{'LC value':>10}")
            lines += [f"{cat.capitalize():<22}{v:>10.4f}" for cat, v in per_cat.items()]
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_tune(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    backend = build_backend(cfg)
    scores = score_corpus(corpus.pairs, backend, cfg.rounds, cfg.jobs)
    gold = [p.label for p in corpus.pairs]
    clf = fit_method(cfg.method, scores, gold, cfg.max_depth, cfg.objective)
    train_f1 = macro_f1(ConfusionCounts.from_labels(gold, [clf.predict(s) for s in scores]))
    _emit(cfg, classifier_to_json(clf, method=cfg.method, backend=backend.describe(),
                                  training_macro_f1=train_f1, config=cfg.serialized()))
    return 0


def cmd_apply(cfg: RunConfig) -> int:
    try:
        doc = json.loads(Path(cfg.model).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"--model: cannot read classifier: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("--model: not a classifier document")
    clf = classifier_from_dict(doc)
    fitted_on = "combined" if isinstance(clf, DecisionTree) else clf.feature
    model_method = doc.get("method", fitted_on)
    if model_method != fitted_on:
        raise ConfigError(f"--model: method {model_method!r} does not match its classifier feature {fitted_on!r}")
    if cfg.method is not None and cfg.method != model_method:
        raise ConfigError(f"--method {cfg.method} does not match the model's method {model_method}")
    model_backend = doc.get("backend", {}).get("kind")
    if model_backend is not None and model_backend != cfg.backend:
        raise ConfigError(f"--backend {cfg.backend} does not match the model's backend {model_backend}")
    corpus = _load(cfg)
    backend = build_backend(cfg)
    scores = score_corpus(corpus.pairs, backend, cfg.rounds, cfg.jobs)
    preds = [clf.predict(s) for s in scores]
    records = [{"id": p.id, "predicted": lab.value, "gold": p.label.value} for p, lab in zip(corpus.pairs, preds)]
    if cfg.report == "json":
        gold = [p.label for p in corpus.pairs]
        doc_out = {"config": cfg.serialized(), "method": model_method, "predictions": records}
        if len(set(gold)) == 2:
            doc_out["macro_f1"] = macro_f1(ConfusionCounts.from_labels(gold, preds))
        _emit(cfg, _dump(doc_out))
    else:
        rows = ["id\tpredicted"] + [f"{r['id']}\t{r['predicted']}" for r in records]
        _emit(cfg, "\n".join(rows) + "\n")
    return 0


def cmd_coverage(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    backend = build_backend(cfg)
    value = coverage(backend, corpus)
    vocab = len(corpus.vocabulary())
    if cfg.report == "json":
        _emit(cfg, _dump({"config": cfg.serialized(), "coverage": value, "vocabulary": vocab}))
    else:
        _emit(cfg, f"vocabulary {vocab}\ncoverage   {value:.2%}\n")
    return 0


COMMANDS = {
    "score": cmd_score,
    "evaluate": cmd_evaluate,
    "complexity": cmd_complexity,
    "tune": cmd_tune,
    "apply": cmd_apply,
    "coverage": cmd_coverage,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", required=True, help="pair corpus file")
    common.add_argument("--format", choices=FORMATS, default="pairs-tsv")
    common.add_argument("--keep-case", dest="casefold", action="store_false", help="do not case-fold tokens")
    common.add_argument("--backend", choices=BACKENDS, default="exact")
    common.add_argument("--vectors", help="textual word-vector file (embedding backend)")
    common.add_argument("--taxonomy", help="taxonomy file (wup backend)")
    common.add_argument("--tau-topk", type=int, default=100,
                        help="general word = centroid of the first K vectors (default 100)")
    common.add_argument("--tau-synset", help="general synset for the wup backend")
    common.add_argument("--oov", choices=OOV_POLICIES, default="exact-fallback")
    common.add_argument("--softmatch-rounds", choices=SOFTMATCH_ROUNDS, default="1")
    common.add_argument("--method", choices=METHODS)
    common.add_argument("--folds", type=int, default=10)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--max-depth", type=int, default=3, help="tree depth cap for the combined method")
    common.add_argument("--per-category", choices=("retune", "global"), default="retune")
    common.add_argument("--objective", choices=("macro-f1", "accuracy"), default="macro-f1")
    common.add_argument("--model", help="classifier JSON written by 'tune'")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--report", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="semsim", description="Semantic Jaccard and edit-distance measures for paraphrase plagiarism.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "score": "score every pair with J, SJ, ED and SED",
        "evaluate": "cross-validate one method",
        "complexity": "lexical concordance of the corpus",
        "tune": "fit a classifier on the whole corpus",
        "apply": "apply a tuned classifier",
        "coverage": "share of the corpus vocabulary known to the backend",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("evaluate", "tune") and args.method is None:
            parser.error(f"{args.command} requires --method")
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return 0 if exc.code in (0, None) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig.from_args(args)
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except SemsimError as exc:
        print(f"semsim: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"semsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
