"""Command-line entry point: ``poetclf <command> ...``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import synthetic
from .classifiers import Kind, ModelFormatError, ModelSpec, load_model
from .corpus import CorpusError, load_corpus
from .experiment import (
    ExperimentConfig,
    PipelineError,
    evaluate_model,
    fit,
    model_document,
    prepare,
    run_sweep,
    split_corpus,
    write_sweep,
)
from .preprocess import StopwordList, preprocess_text
from .vectorize import build_matrix

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _add_corpus_args(p, required=True):
    p.add_argument("--corpus", required=required, help="corpus root directory")
    p.add_argument("--stopwords", default="builtin",
                   help="'builtin', 'none', or a stopword file (default: builtin)")
    p.add_argument("--train-fraction", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=42)


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(corpus=args.corpus, stopwords=args.stopwords,
                            train_fraction=args.train_fraction, seed=args.seed)


def cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus)
    fixed = corpus.is_split
    corpus = split_corpus(corpus, args.train_fraction, args.seed)
    print(f"documents,{len(corpus)}")
    print(f"split,{'fixed' if fixed else f'stratified fraction={args.train_fraction} seed={args.seed}'}")
    print("category,train,test,total")
    for cat, row in corpus.counts().items():
        print(f"{cat},{row['train']},{row['test']},{row['train'] + row['test']}")
    return EXIT_OK


def _spec(args) -> ModelSpec:
    try:
        params = json.loads(args.params) if args.params else {}
        if not isinstance(params, dict):
            raise ValueError("expected a JSON object")
        return ModelSpec.from_json({"kind": args.classifier, "seed": args.seed, **params})
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad --params: {exc}") from None


def cmd_train(args) -> int:
    config = _config(args)
    prepared = prepare(config)
    model, train_k, _ = fit(prepared, _spec(args), args.k)
    doc = model_document(prepared, model, train_k, config, min(args.k, prepared.vocab_size))
    Path(args.out).write_text(_dump(doc), encoding="utf-8")
    print(f"wrote {args.out}: {model.kind.value}, {model.dim} features, {len(train_k)} training documents")
    return EXIT_OK


def cmd_predict(args) -> int:
    model, vocab, doc = load_model(args.model)
    stops = StopwordList(frozenset(doc["preprocess"]["stopwords"]), "model")
    texts = []
    for name in args.files:
        path = Path(name)
        if not path.is_file():
            raise FileNotFoundError(f"no such file: {name}")
        try:
            texts.append((name, path.read_bytes().decode("utf-8")))
        except UnicodeDecodeError:
            raise CorpusError(f"{name}: not valid UTF-8") from None
    for name, text in texts:
        tokens = preprocess_text(text, stops)
        m = build_matrix([tokens], [model.categories[0]], model.categories, vocab=vocab)
        print(f"{name}\t{model.predict(m.vectors[0], m.counts[0]).label}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model, vocab, doc = load_model(args.model)
    stops = StopwordList(frozenset(doc["preprocess"]["stopwords"]), "model")
    split = doc.get("split", {})
    fraction = args.train_fraction if args.train_fraction is not None else split.get("train_fraction", 0.6)
    seed = args.seed if args.seed is not None else split.get("seed", 42)
    corpus = split_corpus(load_corpus(args.corpus), fraction, seed)
    test = corpus.test
    if not test:
        raise CorpusError("corpus has no test documents")
    matrix = build_matrix([preprocess_text(d.text, stops) for d in test], [d.label for d in test],
                          model.categories, [d.id for d in test], vocab=vocab)
    text = evaluate_model(model, matrix).dumps()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    overrides = {"corpus": args.corpus, "seed": args.seed, "output_dir": args.out}
    if args.timing:
        overrides["timing"] = True
    if args.config:
        config = ExperimentConfig.load(args.config, **overrides)
    else:
        config = ExperimentConfig.from_json({}, **overrides)
    if config.corpus is None:
        raise UsageError("sweep needs --corpus or a config with 'corpus'")
    result = run_sweep(config)
    path = write_sweep(result, config.output_dir)
    failed = sum(r.error is not None for r in result.rows)
    print(f"wrote {path} ({len(result.rows)} rows, {failed} failed)")
    return EXIT_OK


def cmd_rank(args) -> int:
    prepared = prepare(_config(args))
    text = prepared.ranking.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    corpus = synthetic.generate(seed=args.seed)
    synthetic.write_corpus(corpus, args.out)
    n = sum(len(v) for v in corpus.documents.values())
    print(f"wrote {n} poems in {len(corpus.documents)} classes to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poetclf", description="Poet detection: TF-IDF + chi-square + five classifiers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a corpus and print per-class split counts")
    _add_corpus_args(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="fit one model and write it as JSON")
    _add_corpus_args(p)
    p.add_argument("--classifier", required=True, type=str.upper, choices=[k.value for k in Kind])
    p.add_argument("--k", type=int, default=700, help="number of chi-square features (default 700)")
    p.add_argument("--params", help="JSON object of hyperparameters, e.g. '{\"C\": 0.5}'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="label text files with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a model on the test split of a corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--train-fraction", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="run every classifier at every feature count")
    p.add_argument("--config", help="JSON config; every field optional")
    p.add_argument("--corpus")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory (default: results)")
    p.add_argument("--timing", action="store_true",
                   help="record wall time in the seconds column (otherwise 0, so reruns are byte-identical)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rank", help="write the chi-square term ranking as CSV")
    _add_corpus_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("synth", help="write the synthetic three-poet corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    warnings.simplefilter("default")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"poetclf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, PipelineError, ModelFormatError, FileNotFoundError, OSError,
            ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"poetclf: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
