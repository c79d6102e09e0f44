"""Command-line entry point: ``hca <subcommand>``.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 divergence or
pipeline error.
"""
import argparse
import sys
from pathlib import Path

from . import __version__, pipeline as P
from .errors import HCAError
from .kernels import BACKEND

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_PIPELINE = 0, 2, 3, 4

_OVERRIDES = (
    # (flag, dest, type)
    ("--dataset", "dataset", str),
    ("--dataset-format", "dataset_format", str),
    ("--categories", "categories", str),
    ("--synonyms", "synonyms", str),
    ("--stopwords", "stopwords", str),
    ("--slang", "slang", str),
    ("--reference-vocab", "reference_vocab", str),
    ("--emoticons", "emoticons", str),
    ("--max-depth", "max_depth", int),
    ("--min-count", "min_count", int),
    ("--classifier", "classifier", str),
    ("--smoothing", "smoothing", float),
    ("--epochs", "epochs", int),
    ("--learning-rate", "learning_rate", float),
    ("--l2", "l2", float),
    ("--tolerance", "tolerance", float),
    ("--seed", "seed", int),
    ("--test-fraction", "test_fraction", float),
)


def _add_common(p):
    p.add_argument("-c", "--config", help="YAML run configuration")
    p.add_argument("-o", "--out", dest="output_dir", help="output directory for stage artifacts")
    for flag, dest, typ in _OVERRIDES:
        p.add_argument(flag, dest=dest, type=typ, default=None)
    p.add_argument("--hashtags", default=None, help="comma-separated hashtag filter")
    p.add_argument(
        "--restrict-corpus-to-dataset", dest="restrict_corpus_to_dataset",
        action="store_const", const=True, default=None,
        help="keep only corpus words that occur in the normalized dataset",
    )


def _resolve(args) -> P.RunConfig:
    overrides = {dest: getattr(args, dest) for _, dest, _ in _OVERRIDES}
    overrides["output_dir"] = args.output_dir
    overrides["restrict_corpus_to_dataset"] = args.restrict_corpus_to_dataset
    if args.hashtags is not None:
        overrides["hashtags"] = tuple(h for h in args.hashtags.split(",") if h.strip())
    for key in P.PATH_FIELDS:
        if overrides.get(key):
            overrides[key] = str(Path(overrides[key]).resolve())
    if overrides.get("output_dir"):
        overrides["output_dir"] = str(Path(overrides["output_dir"]).resolve())
    if args.config:
        return P.RunConfig.from_file(args.config, **overrides)
    return P.RunConfig(**{k: v for k, v in overrides.items() if v is not None})


def _out_dir(cfg, create=True) -> Path:
    out = Path(cfg.output_dir)
    if create:
        out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(cfg, args):
    report = P.hca_run(cfg)
    sys.stdout.write(P.format_report(report))


def cmd_ingest(cfg, args):
    cfg.validate(needs=("dataset",))
    out = _out_dir(cfg)
    ds, counts = P.run_ingest(cfg)
    P.write_ingest(cfg, out, ds, counts)
    print(f"ingested {counts['ingested']} records, kept {counts['filtered']} -> {out / P.ARTIFACTS['ingest']}")


def cmd_normalize(cfg, args):
    cfg.validate(needs=("stopwords", "slang", "reference_vocab", "emoticons"))
    out = _out_dir(cfg)
    ds, _ = P.read_ingest(out)
    docs = P.run_normalize(cfg, ds)
    P.write_normalize(cfg, out, docs)
    print(f"normalized {len(docs)} records -> {out / P.ARTIFACTS['normalize']}")


def cmd_build_corpus(cfg, args):
    cfg.validate(needs=("categories", "synonyms"))
    out = _out_dir(cfg)
    docs = P.read_normalize(out) if cfg.restrict_corpus_to_dataset else []
    corpus, _ = P.run_build_corpus(cfg, docs)
    P.write_build_corpus(out, corpus)
    print(f"corpus: {len(corpus.entries)} words, {len(corpus.conflicts)} conflicts -> {out / P.ARTIFACTS['build-corpus']}")


def cmd_weak_label(cfg, args):
    cfg.validate(needs=("categories",))
    out = _out_dir(cfg)
    docs = P.read_normalize(out)
    corpus = P.read_build_corpus(out)
    spec_order = [s.name for s in P.load_specs(cfg.specs_path())]
    labels = P.run_weak_label(docs, corpus, spec_order)
    P.write_weak_label(cfg, out, labels, spec_order)
    n = sum(1 for l in labels if l.category is not None)
    print(f"weak-labeled {n} of {len(labels)} documents -> {out / P.ARTIFACTS['weak-label']}")


def cmd_train(cfg, args):
    cfg.validate(needs=())
    out = _out_dir(cfg)
    docs = P.read_normalize(out)
    labels, spec_order = P.read_weak_label(out)
    vocab, model, n = P.run_train(cfg, docs, labels, spec_order)
    P.write_train(out, vocab, model)
    print(f"trained {model.kind} on {n} documents, V={len(vocab)} -> {out / P.ARTIFACTS['train']}")


def cmd_classify(cfg, args):
    cfg.validate(needs=())
    out = _out_dir(cfg)
    docs = P.read_normalize(out)
    vocab, model = P.read_train(out)
    rows = P.run_classify(docs, vocab, model)
    P.write_classify(cfg, out, rows, model)
    print(f"classified {len(rows)} documents -> {out / P.ARTIFACTS['classify']}")


def cmd_eval(cfg, args):
    cfg.validate(needs=())
    out = _out_dir(cfg)
    _, counts = P.read_ingest(out)
    docs = P.read_normalize(out)
    labels, spec_order = P.read_weak_label(out)
    _, rows = P.read_classify(out)
    report = P.run_eval(cfg, counts, docs, labels, spec_order, rows, require_gold=True)
    P.write_eval(out, report)
    sys.stdout.write(P.format_report(report))


def cmd_synth(args):
    from .synth import generate

    corpus = generate(n_per_category=args.per_category, seed=args.seed)
    paths = corpus.write(args.directory)
    print(f"wrote {len(corpus.records)} planted posts; config at {paths['config']}")


COMMANDS = {
    "run": (cmd_run, "run every stage end to end"),
    "ingest": (cmd_ingest, "read the dataset and filter by hashtag"),
    "normalize": (cmd_normalize, "casing, notation/stop-word removal, elongation, slang"),
    "build-corpus": (cmd_build_corpus, "expand category seeds into the word corpus"),
    "weak-label": (cmd_weak_label, "label documents by corpus hits"),
    "train": (cmd_train, "fit vocabulary and classifier on weak labels"),
    "classify": (cmd_classify, "assign every document a category"),
    "eval": (cmd_eval, "metrics against gold labels and the run report"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="hca", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hca {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        _add_common(sub.add_parser(name, help=help_))
    p = sub.add_parser("synth", help="write a synthetic planted-category corpus")
    p.add_argument("directory")
    p.add_argument("--per-category", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            cmd_synth(args)
        else:
            COMMANDS[args.command][0](_resolve(args), args)
    except HCAError as exc:
        print(f"hca: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hca: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"hca: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
