"""Command-line interface.

Subcommands cover the full workflow: ``extract`` Java source into a facts
file, ``refactor`` a facts file into a method partition, ``evaluate`` a
partition, ``compare`` many models over a corpus, ``fetch-corpus`` download
the bundled evaluation classes, and ``gen-synthetic`` build a ground-truth
corpus.

Exit codes: 0 success, 1 usage or configuration error, 2 bad input data,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
import warnings

from .cluster import load_partition, save_partition
from .compare import emit, run_comparison
from .config import load_config, specs_from_config
from .corpus import check_against_manifest, fetch_corpus, load_corpus_dir, load_manifest
from .errors import (
    ChecksumMismatch,
    ConfigError,
    DimensionMismatch,
    EmptyCorpus,
    MissingMethod,
    ModelUnavailable,
    NetworkError,
    NoClusters,
    ParseError,
    SchemaError,
    TooFewMethods,
    UnsupportedConstruct,
    WeightError,
)
from .facts import load_facts, save_facts
from .javaparse import parse_file
from .pipeline import default_specs, evaluate, refactor, spec_from_options
from .synthetic import write_corpus

USAGE_EXIT = 1
DATA_EXIT = 2
INTERNAL_EXIT = 3

_DATA_ERRORS = (
    ParseError,
    UnsupportedConstruct,
    SchemaError,
    EmptyCorpus,
    MissingMethod,
    DimensionMismatch,
    WeightError,
    TooFewMethods,
    NoClusters,
    NetworkError,
    ChecksumMismatch,
    ModelUnavailable,
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
    PermissionError,
    UnicodeDecodeError,
    json.JSONDecodeError,
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _emit_warnings(messages) -> None:
    for message in messages:
        print(f"warning: {message}", file=sys.stderr)


def cmd_extract(args: argparse.Namespace) -> int:
    facts = parse_file(args.source, exclude_accessors=args.exclude_accessors)
    _emit_warnings(facts.warnings)
    out = _open_out(args.out)
    try:
        save_facts(facts, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_refactor(args: argparse.Namespace) -> int:
    with open(args.facts, "r", encoding="utf-8") as fh:
        facts = load_facts(fh)
    options: dict = {
        "graph": args.model,
        "embedding": args.embedding,
        "seed": args.seed,
        "min_methods": args.min_methods,
        "xi": args.xi,
    }
    if args.vectors is not None:
        options["vectors_path"] = args.vectors
    spec = spec_from_options(options)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = refactor(facts, spec)
    _emit_warnings(str(w.message) for w in caught)
    _emit_warnings(result.partition.warnings)
    if args.trace is not None and result.train_result is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("epoch,loss,reconstruction,kl\n")
            for epoch, total, recon, kl in result.train_result.trace:
                fh.write(f"{epoch},{total:.17g},{recon:.17g},{kl:.17g}\n")
    out = _open_out(args.out)
    try:
        save_partition(result.partition, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    with open(args.facts, "r", encoding="utf-8") as fh:
        facts = load_facts(fh)
    with open(args.partition, "r", encoding="utf-8") as fh:
        partition = load_partition(fh)
    report = evaluate(facts, partition)
    text = report.to_csv() if args.csv else report.to_markdown()
    out = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    if args.config is not None:
        specs, options = specs_from_config(load_config(args.config))
    else:
        specs, options = default_specs(), {}
    corpus_dir = args.corpus or options.get("corpus")
    if not corpus_dir:
        raise ConfigError("no corpus directory: pass --corpus or set 'corpus' in the config")
    vectors_dir = args.vectors_dir or options.get("vectors_dir")
    exclude = args.exclude_accessors or bool(options.get("exclude_accessors"))
    corpus = load_corpus_dir(str(corpus_dir), exclude_accessors=exclude)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = run_comparison(corpus, specs, vectors_dir=vectors_dir)
    report_spec = options.get("report_spec")
    paths = emit(result, args.out, report_spec=str(report_spec) if report_spec else None)
    for cell in result.error_cells:
        print(f"warning: {cell.class_name} x {cell.model}: {cell.error}", file=sys.stderr)
    print(
        f"{len(result.ok_cells)} ok, {len(result.error_cells)} failed;"
        f" wrote {len(paths)} files to {args.out}"
    )
    return 0


def cmd_fetch_corpus(args: argparse.Namespace) -> int:
    entries = load_manifest(args.manifest)
    report = fetch_corpus(entries, args.out, timeout=args.timeout, overwrite=args.overwrite)
    print(report.summary())
    if report.fetched:
        try:
            corpus = load_corpus_dir(args.out)
        except EmptyCorpus:
            corpus = []
        _emit_warnings(check_against_manifest(corpus, entries))
    if entries and not report.fetched:
        raise NetworkError("no corpus entries could be fetched")
    return 0


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    paths = write_corpus(args.out, n_classes=args.classes, seed=args.seed)
    print(f"wrote {len(paths)} classes to {args.out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="classplit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="parse a Java file into a facts JSON")
    p.add_argument("source", help="path to a .java file")
    p.add_argument("-o", "--out", default=None, help="facts JSON path (default stdout)")
    p.add_argument("--exclude-accessors", action="store_true", help="drop getters/setters")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("refactor", help="partition the methods of a facts file")
    p.add_argument("facts", help="facts JSON path")
    p.add_argument("--model", choices=("wc", "vgae"), default="vgae")
    p.add_argument("--embedding", choices=("lsi", "lda", "bert", "codebert"), default="lsi")
    p.add_argument("--vectors", default=None, help="imported vector file for bert/codebert")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-methods", type=_positive_int, default=3)
    p.add_argument("--xi", type=float, default=0.05)
    p.add_argument("--trace", default=None, help="write per-epoch loss CSV here")
    p.add_argument("-o", "--out", default=None, help="partition JSON path (default stdout)")
    p.set_defaults(func=cmd_refactor)

    p = sub.add_parser("evaluate", help="score a partition with cohesion/coupling metrics")
    p.add_argument("facts", help="facts JSON path")
    p.add_argument("partition", help="partition JSON path")
    p.add_argument("--csv", action="store_true", help="CSV instead of markdown")
    p.add_argument("-o", "--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="run many models over a corpus directory")
    p.add_argument("--config", default=None, help="harness config file")
    p.add_argument("--corpus", default=None, help="directory of .java / facts JSON files")
    p.add_argument("--vectors-dir", default=None, help="directory of imported vector files")
    p.add_argument("--exclude-accessors", action="store_true")
    p.add_argument("-o", "--out", required=True, help="report directory")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fetch-corpus", help="download the evaluation classes")
    p.add_argument("manifest", nargs="?", default=None, help="manifest file (default: bundled)")
    p.add_argument("-o", "--out", default="corpus", help="download directory")
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_fetch_corpus)

    p = sub.add_parser("gen-synthetic", help="generate a ground-truth corpus")
    p.add_argument("--classes", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen_synthetic)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"classplit: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except _DATA_ERRORS as exc:
        print(f"classplit: error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except Exception as exc:  # noqa: BLE001  last-resort mapping to exit code 3
        traceback.print_exc()
        print(f"classplit: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main(argv=sys.argv[1:]))
