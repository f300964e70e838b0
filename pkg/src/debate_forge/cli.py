"""Command-line entry point: ``debate-forge <subcommand> ...``.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import reports
from .agreement import STANCE_ROW, agreement_report, load_annotations, pairs_from_annotations
from .classify import (
    SOFTMAX,
    TrainConfig,
    TrainingError,
    category_docs,
    docs_from_corpus,
    epoch_sweep,
    evaluate,
    load_dataset,
    load_models,
    make_synthetic_dataset,
    save_dataset,
    save_models,
    split_train_test,
    stance_docs,
    train,
    train_baseline,
    train_ovr,
)
from .classify.container import ModelFormatError
from .classify.evaluation import category_signature
from .config import ConfigError, apply_section, load_config
from .corpus import CATEGORIES, Category, CorpusError, corpus_stats, load_corpus, save_corpus
from .ingest import FetchConfig, IngestConfig, IngestManifest, ingest
from .sentiment import SentimentConfig, annotate_corpus, load_lexicon, polarity_report
from .textrank import RankConfig, enrich_corpus, load_stopwords

log = logging.getLogger("debate_forge")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

BASELINE_SUFFIX = ".baseline"


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _epoch_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values) or values != sorted(values):
        raise argparse.ArgumentTypeError("epochs must be positive and ascending")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="seed for every random choice (default 42)")
    common.add_argument("--config", type=Path, help="INI config file (fallback: $DEBATE_FORGE_CONFIG)")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--tsv", action="store_true", help="emit tables as TSV")

    parser = _Parser(prog="debate-forge", description="Parliamentary debate synopsis corpus toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="parse transcripts into a corpus")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--lexicon", help="debate-type heading lexicon")
    p.add_argument("--extract-cmd", help="text extraction command template, e.g. 'pdftotext {input} {output}'")
    p.add_argument("--rate-limit", type=float, help="seconds between downloads (default 2)")
    p.add_argument("--download-dir")
    p.add_argument("--members", help="member seed file (JSON Lines)")
    p.add_argument("--jobs", type=int)
    p.add_argument("--report", type=Path, help="write the parse report as JSON")

    p = sub.add_parser("stats", parents=[common], help="corpus statistics tables")
    p.add_argument("corpus", type=Path)

    p = sub.add_parser("summarize", parents=[common], help="fill debate keywords and summaries")
    p.add_argument("corpus", type=Path)
    p.add_argument("--debate")
    p.add_argument("--ratio", type=float, help="summary sentence ratio")
    p.add_argument("--keyword-ratio", type=float)
    p.add_argument("--stopwords", type=Path)
    _output_args(p)

    p = sub.add_parser("sentiment", parents=[common], help="fill speech polarity")
    p.add_argument("corpus", type=Path)
    p.add_argument("--lexicon", type=Path)
    _output_args(p)

    p = sub.add_parser("agreement", parents=[common], help="annotator agreement table")
    p.add_argument("--annotations", type=Path, required=True)

    p = sub.add_parser("train", parents=[common], help="train stance or category models")
    p.add_argument("source", type=Path, help="corpus directory or dataset JSON Lines file")
    p.add_argument("--task", choices=("stance", "categories"), required=True)
    p.add_argument("--model-out", type=Path, required=True)
    p.add_argument("--test-out", type=Path, help="write the held-out split as a dataset file")
    p.add_argument("--epochs", type=int)
    p.add_argument("--loss", choices=("softmax", "hierarchical_softmax"))
    p.add_argument("--no-baseline", action="store_true", help="skip the TF-IDF hinge baseline")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("evaluate", parents=[common], help="accuracy of saved models on a dataset")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--test", type=Path, required=True)

    p = sub.add_parser("sweep", parents=[common], help="accuracy as a function of training epochs")
    p.add_argument("source", type=Path)
    p.add_argument("--epochs", type=_epoch_list, default=[5, 10, 25, 50, 100])
    p.add_argument("--task", choices=("stance", "categories"), default="categories")
    p.add_argument("--category", default=Category.APPRECIATE.value, choices=[c.value for c in CATEGORIES])

    p = sub.add_parser("synth", parents=[common], help="write a synthetic annotated dataset")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("-n", type=int, default=1201)
    return parser


def _output_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--out", type=Path, help="output corpus directory (default: <corpus>-<stage>)")
    g.add_argument("--in-place", action="store_true")


def _emit(tables, tsv: bool) -> None:
    sys.stdout.write("\n".join(t.render(tsv) for t in tables))


def _require_dir(path: Path) -> Path:
    if not path.is_dir():
        raise DataError(f"corpus directory not found: {path}")
    return path


def _enrich_target(args, stage: str) -> Path:
    if args.in_place:
        return args.corpus
    return args.out or args.corpus.with_name(f"{args.corpus.name}-{stage}")


def _train_config(args, sections) -> tuple[TrainConfig, bool]:
    section = sections.get("classify", {})
    cfg = apply_section(TrainConfig(seed=args.seed), section)
    cfg = replace(cfg, seed=args.seed)
    explicit_loss = "loss" in section
    if getattr(args, "epochs", None) and isinstance(args.epochs, int):
        cfg = replace(cfg, epochs=args.epochs)
    if getattr(args, "loss", None):
        cfg = replace(cfg, loss=args.loss)
        explicit_loss = True
    return cfg, explicit_loss


def _annotated(source: Path):
    if source.is_dir():
        docs = docs_from_corpus(load_corpus(source))
    elif source.is_file():
        docs = load_dataset(source)
    else:
        raise DataError(f"no such corpus or dataset: {source}")
    if not docs:
        raise DataError(f"no annotated speeches in {source}")
    return docs


def cmd_ingest(args, sections) -> int:
    section = dict(sections.get("ingest", {}))
    fetch = apply_section(FetchConfig(), {k: v for k, v in section.items() if k in ("extract_command", "rate_limit", "timeout")})
    cfg = apply_section(IngestConfig(), section, ignore=("extract_command", "rate_limit", "timeout"))
    if args.extract_cmd:
        fetch = replace(fetch, extract_command=args.extract_cmd)
    if args.rate_limit is not None:
        fetch = replace(fetch, rate_limit=args.rate_limit)
    cfg = replace(
        cfg,
        fetch=fetch,
        lexicon_path=args.lexicon or cfg.lexicon_path,
        download_dir=args.download_dir or cfg.download_dir,
        members_path=args.members or cfg.members_path,
        jobs=args.jobs or cfg.jobs,
    )
    manifest = IngestManifest.load(args.manifest)
    report = ingest(manifest, args.out, cfg)
    for w in report.warnings:
        log.warning("%s", w)
    if args.report:
        args.report.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    table = reports.Table(
        "Ingest report",
        ["Item", "Count"],
        [
            ["Files processed", str(report.files_processed)],
            ["Files failed", str(report.files_failed)],
            ["Debates", str(report.debates_found)],
            ["Speeches", str(report.speeches_found)],
            ["Lines skipped", str(report.lines_skipped)],
            ["Warnings", str(len(report.warnings))],
        ],
    )
    _emit([table], args.tsv)
    return EXIT_OK


def cmd_stats(args, sections) -> int:
    stats = corpus_stats(load_corpus(_require_dir(args.corpus)))
    _emit(
        [
            reports.dataset_table(stats),
            reports.debate_type_table(stats),
            reports.annotation_table(stats),
            reports.polarity_table({**stats.polarity_histogram, "Total": stats.speech_count}),
        ],
        args.tsv,
    )
    return EXIT_OK


def cmd_summarize(args, sections) -> int:
    corpus = load_corpus(_require_dir(args.corpus))
    cfg = apply_section(RankConfig(), sections.get("textrank", {}), ignore=("stopwords",))
    if args.ratio is not None:
        cfg = replace(cfg, summary_ratio=args.ratio)
    if args.keyword_ratio is not None:
        cfg = replace(cfg, keyword_ratio=args.keyword_ratio)
    stop_path = args.stopwords or sections.get("textrank", {}).get("stopwords")
    try:
        corpus = enrich_corpus(corpus, cfg, args.debate, load_stopwords(stop_path))
    except KeyError as exc:
        raise DataError(str(exc)) from exc
    target = _enrich_target(args, "summarized")
    save_corpus(corpus, target)
    rows = [[d.id, str(len(d.keywords)), str(len(d.summary.split("\n"))), " ".join(d.keywords[:5])]
            for d in corpus.debates if args.debate is None or d.id == args.debate]
    _emit([reports.Table(f"Summaries written to {target}", ["Debate", "Keywords", "Summary sentences", "Top keywords"], rows)], args.tsv)
    return EXIT_OK


def cmd_sentiment(args, sections) -> int:
    corpus = load_corpus(_require_dir(args.corpus))
    section = dict(sections.get("sentiment", {}))
    lex_path = args.lexicon or section.pop("lexicon", None)
    section.pop("lexicon", None)
    cfg = apply_section(SentimentConfig(), section)
    corpus = annotate_corpus(corpus, load_lexicon(lex_path), cfg)
    save_corpus(corpus, _enrich_target(args, "sentiment"))
    _emit([reports.polarity_table(polarity_report(corpus))], args.tsv)
    return EXIT_OK


def cmd_agreement(args, sections) -> int:
    pairs = pairs_from_annotations(load_annotations(args.annotations))
    if not pairs[STANCE_ROW]:
        del pairs[STANCE_ROW]
    _emit([reports.agreement_table(agreement_report(pairs))], args.tsv)
    return EXIT_OK


def cmd_train(args, sections) -> int:
    cfg, explicit_loss = _train_config(args, sections)
    docs = _annotated(args.source)
    models: dict[str, object] = {}
    if args.task == "stance":
        labeled = stance_docs(docs)
        if not explicit_loss:
            cfg = replace(cfg, loss=SOFTMAX)
        train_docs, test_docs = split_train_test(labeled, 0.8, args.seed)
        models["stance"] = train(train_docs, cfg)
        acc = {"ngram-embed": evaluate(models["stance"], test_docs).accuracy}
        if not args.no_baseline:
            models["stance" + BASELINE_SUFFIX] = train_baseline(train_docs, seed=args.seed)
            acc["tfidf-svm"] = evaluate(models["stance" + BASELINE_SUFFIX], test_docs).accuracy
        table = reports.task1_table(acc)
        held_out = [d for d in docs if d.stance is not None]
        held_out = split_train_test(held_out, 0.8, args.seed, key=lambda d: d.stance)[1]
    else:
        train_docs, held_out = split_train_test(docs, 0.8, args.seed, key=category_signature)
        embed = train_ovr(train_docs, cfg, jobs=args.jobs)
        acc = {"ngram-embed": {c: evaluate(m, category_docs(held_out, c)).accuracy for c, m in embed.items()}}
        models.update(embed)
        if not args.no_baseline:
            base = train_ovr(train_docs, cfg, trainer=lambda ds: train_baseline(ds, seed=args.seed), jobs=args.jobs)
            acc["tfidf-svm"] = {c: evaluate(m, category_docs(held_out, c)).accuracy for c, m in base.items()}
            models.update({c + BASELINE_SUFFIX: m for c, m in base.items()})
        table = reports.task2_table(acc)
    save_models(models, args.model_out)
    if args.test_out:
        save_dataset(held_out, args.test_out)
    _emit([table], args.tsv)
    return EXIT_OK


def cmd_evaluate(args, sections) -> int:
    models = load_models(args.model)
    docs = load_dataset(args.test)
    if "stance" in models:
        labeled = stance_docs(docs)
        if not labeled:
            raise DataError("test file has no stance labels")
        acc = {"ngram-embed": evaluate(models["stance"], labeled).accuracy}
        if "stance" + BASELINE_SUFFIX in models:
            acc["tfidf-svm"] = evaluate(models["stance" + BASELINE_SUFFIX], labeled).accuracy
        _emit([reports.task1_table(acc)], args.tsv)
        return EXIT_OK
    acc: dict[str, dict[str, float]] = {"ngram-embed": {}, "tfidf-svm": {}}
    for name, model in models.items():
        column = "tfidf-svm" if name.endswith(BASELINE_SUFFIX) else "ngram-embed"
        cat = name.removesuffix(BASELINE_SUFFIX)
        acc[column][cat] = evaluate(model, category_docs(docs, cat)).accuracy
    _emit([reports.task2_table({k: v for k, v in acc.items() if v})], args.tsv)
    return EXIT_OK


def cmd_sweep(args, sections) -> int:
    cfg, explicit_loss = _train_config(args, sections)
    docs = _annotated(args.source)
    if args.task == "stance":
        labeled, label = stance_docs(docs), "stance"
    else:
        labeled, label = category_docs(docs, args.category), Category(args.category).display
    if not explicit_loss:
        cfg = replace(cfg, loss=SOFTMAX)
    rows = epoch_sweep(labeled, cfg, args.epochs)
    _emit([reports.sweep_table(rows, label)], args.tsv)
    return EXIT_OK


def cmd_synth(args, sections) -> int:
    docs = make_synthetic_dataset(args.n, args.seed)
    save_dataset(docs, args.out)
    _emit([reports.Table("Synthetic dataset", ["Item", "Count"], [["Documents", str(len(docs))]])], args.tsv)
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "stats": cmd_stats,
    "summarize": cmd_summarize,
    "sentiment": cmd_sentiment,
    "agreement": cmd_agreement,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        sections = load_config(args.config)
        return COMMANDS[args.command](args, sections)
    except (DataError, CorpusError, ConfigError, ModelFormatError, TrainingError, ValueError, OSError) as exc:
        print(f"debate-forge: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
