"""End-to-end run and the per-stage steps shared with the CLI subcommands.

Every stage reads the previous stage's artifact from the output directory
and writes its own, so chaining the subcommands reproduces ``hca_run``
byte for byte.
"""
import contextlib
import json
import math
import random
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import yaml

from . import __version__
from .classify import (
    KINDS,
    LabeledSet,
    TrainConfig,
    evaluate,
    load_model,
    predict_many,
    save_model,
    score_kind,
    train,
)
from .errors import HCAError, InputFileError, PipelineError, ValidationError
from .features import Vocabulary, fit_vocabulary, vectorize
from .ingest import Dataset, filter_by_hashtags, guess_format, make_record, read_dataset
from .lexicon import (
    DEFAULT_MAX_DEPTH,
    CategoryCorpus,
    WeakLabel,
    build_corpus,
    label_distribution,
    load_corpus,
    load_graph,
    load_specs,
    weak_label,
)
from .normalize import NormalizedDoc, default_resource, load_config, normalize

DEFAULT_HASHTAGS = ("engineeringproblems", "engineeringperks")

ARTIFACTS = {
    "ingest": "ingested.jsonl",
    "normalize": "normalized.jsonl",
    "build-corpus": "corpus.tsv",
    "conflicts": "conflicts.txt",
    "weak-label": "weak_labels.jsonl",
    "vocab": "vocab.tsv",
    "train": "model.txt",
    "classify": "classified.jsonl",
    "eval": "report.jsonl",
    "report-text": "report.txt",
}
PRODUCER = {
    "ingested.jsonl": "ingest",
    "normalized.jsonl": "normalize",
    "corpus.tsv": "build-corpus",
    "weak_labels.jsonl": "weak-label",
    "vocab.tsv": "train",
    "model.txt": "train",
    "classified.jsonl": "classify",
}
PATH_FIELDS = ("dataset", "stopwords", "slang", "reference_vocab", "emoticons", "categories", "synonyms")


@dataclass
class RunConfig:
    dataset: Optional[str] = None
    categories: Optional[str] = None
    synonyms: Optional[str] = None
    stopwords: Optional[str] = None
    slang: Optional[str] = None
    reference_vocab: Optional[str] = None
    emoticons: Optional[str] = None
    dataset_format: str = "auto"
    hashtags: Tuple[str, ...] = DEFAULT_HASHTAGS
    max_depth: int = DEFAULT_MAX_DEPTH
    restrict_corpus_to_dataset: bool = False
    min_count: int = 1
    classifier: str = "svm"
    smoothing: float = 1.0
    epochs: int = TrainConfig.epochs
    learning_rate: float = TrainConfig.learning_rate
    l2: float = TrainConfig.l2
    tolerance: float = TrainConfig.tolerance
    seed: int = 0
    test_fraction: float = 0.2
    output_dir: str = "hca-out"

    def __post_init__(self):
        self.hashtags = tuple(sorted({h.lstrip("#").lower() for h in self.hashtags}))

    @classmethod
    def from_file(cls, path, **overrides) -> "RunConfig":
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except OSError as exc:
            raise InputFileError(f"cannot read config {path}: {exc.strerror or exc}") from None
        except yaml.YAMLError as exc:
            raise ValidationError(f"config {path} is not valid YAML: {exc}") from None
        if not isinstance(raw, dict):
            raise ValidationError(f"config {path} must be a mapping")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown config key(s) in {path}: {sorted(unknown)}")
        base = path.parent
        for key in PATH_FIELDS + ("output_dir",):
            if raw.get(key) is not None:
                raw[key] = str((base / raw[key]).resolve())
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**raw)

    def specs_path(self) -> str:
        return self.categories or str(default_resource("categories.tsv"))

    def synonyms_path(self) -> str:
        return self.synonyms or str(default_resource("synonyms.tsv"))

    def train_config(self) -> TrainConfig:
        return TrainConfig(self.epochs, self.learning_rate, self.l2, self.seed, self.tolerance)

    def validate(self, needs=PATH_FIELDS) -> None:
        if "dataset" in needs and not self.dataset:
            raise ValidationError("config is missing required path 'dataset'")
        for key in needs:
            value = getattr(self, key)
            if value and not Path(value).is_file():
                raise InputFileError(f"{key} file not found: {value}")
        if self.classifier not in KINDS:
            raise ValidationError(f"classifier must be one of {KINDS}, got {self.classifier!r}")
        if not self.hashtags:
            raise ValidationError("at least one hashtag is required")
        if self.max_depth < 0:
            raise ValidationError("max_depth must be >= 0")
        if not 0.0 <= self.test_fraction < 1.0:
            raise ValidationError("test_fraction must lie in [0, 1)")
        self.train_config()

    def echo(self) -> dict:
        """Resolved settings recorded into every artifact (output_dir excluded)."""
        out = asdict(self)
        out.pop("output_dir")
        out["hashtags"] = list(self.hashtags)
        return out


# ----------------------------------------------------------------------
# artifact helpers


def _meta(cfg: RunConfig, stage: str, **extra) -> dict:
    meta = {"stage": stage, "tool": "hca", "version": __version__, "seed": cfg.seed, "config": cfg.echo()}
    meta.update(extra)
    return {"_meta": meta}


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, allow_nan=True)


def write_jsonl(path: Path, meta: dict, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dumps(meta) + "\n")
        for row in rows:
            fh.write(_dumps(row) + "\n")


def read_artifact(out_dir: Path, name: str) -> Tuple[dict, List[dict]]:
    path = Path(out_dir) / name
    if not path.is_file():
        raise InputFileError(
            f"missing artifact {path}; run the '{PRODUCER.get(name, '?')}' stage first"
        )
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValidationError(f"artifact {path} is empty")
    head = json.loads(lines[0])
    if "_meta" not in head:
        raise ValidationError(f"artifact {path} lacks a _meta header line")
    return head["_meta"], [json.loads(line) for line in lines[1:] if line]


def require_file(out_dir: Path, name: str) -> Path:
    path = Path(out_dir) / name
    if not path.is_file():
        raise InputFileError(
            f"missing artifact {path}; run the '{PRODUCER.get(name, '?')}' stage first"
        )
    return path


@contextlib.contextmanager
def stage_context(name: str):
    try:
        yield
    except HCAError as exc:
        if exc.args and not str(exc.args[0]).startswith("["):
            exc.args = (f"[{name}] {exc.args[0]}",) + exc.args[1:]
        raise


# ----------------------------------------------------------------------
# stages


def run_ingest(cfg: RunConfig) -> Tuple[Dataset, Dict[str, int]]:
    with stage_context("ingest"):
        fmt = guess_format(cfg.dataset) if cfg.dataset_format == "auto" else cfg.dataset_format
        ds = read_dataset(cfg.dataset, fmt)
        kept = filter_by_hashtags(ds, set(cfg.hashtags))
    return kept, {"ingested": len(ds), "filtered": len(kept)}


def write_ingest(cfg, out_dir, ds, counts):
    write_jsonl(out_dir / ARTIFACTS["ingest"], _meta(cfg, "ingest", counts=counts),
                (r.to_json() for r in ds.records))


def read_ingest(out_dir) -> Tuple[Dataset, Dict[str, int]]:
    meta, rows = read_artifact(out_dir, ARTIFACTS["ingest"])
    recs = [make_record(r["id"], r["text"], r.get("hashtags"), r.get("label")) for r in rows]
    return Dataset(recs), dict(meta["counts"])


def run_normalize(cfg: RunConfig, ds: Dataset) -> List[NormalizedDoc]:
    with stage_context("normalize"):
        ncfg = load_config(cfg.stopwords, cfg.slang, cfg.reference_vocab, cfg.emoticons)
    docs = []
    for rec in ds.records:
        try:
            docs.append(normalize(rec, ncfg))
        except HCAError as exc:
            raise PipelineError(str(exc), stage="normalize", record_id=rec.id) from exc
    return docs


def write_normalize(cfg, out_dir, docs):
    write_jsonl(out_dir / ARTIFACTS["normalize"], _meta(cfg, "normalize"), (d.to_json() for d in docs))


def read_normalize(out_dir) -> List[NormalizedDoc]:
    _, rows = read_artifact(out_dir, ARTIFACTS["normalize"])
    return [NormalizedDoc(r["id"], tuple(r["tokens"]), r.get("label")) for r in rows]


def run_build_corpus(cfg: RunConfig, docs: Sequence[NormalizedDoc]) -> Tuple[CategoryCorpus, List[str]]:
    with stage_context("build-corpus"):
        specs = load_specs(cfg.specs_path())
        graph = load_graph(cfg.synonyms_path())
        corpus = build_corpus(specs, graph, cfg.max_depth)
        if cfg.restrict_corpus_to_dataset:
            corpus = corpus.restrict({t for d in docs for t in d.tokens})
    return corpus, [s.name for s in specs]


def write_build_corpus(out_dir, corpus):
    (out_dir / ARTIFACTS["build-corpus"]).write_text(corpus.dump(), encoding="utf-8", newline="\n")
    (out_dir / ARTIFACTS["conflicts"]).write_text(
        "".join(w + "\n" for w in corpus.conflicts), encoding="utf-8", newline="\n"
    )


def read_build_corpus(out_dir) -> CategoryCorpus:
    corpus = load_corpus(require_file(out_dir, ARTIFACTS["build-corpus"]))
    conflicts = Path(out_dir) / ARTIFACTS["conflicts"]
    if conflicts.is_file():
        corpus.conflicts = conflicts.read_text(encoding="utf-8").split()
    return corpus


def run_weak_label(docs, corpus, spec_order) -> List[WeakLabel]:
    with stage_context("weak-label"):
        return [weak_label(d, corpus, spec_order) for d in docs]


def write_weak_label(cfg, out_dir, labels, spec_order):
    write_jsonl(out_dir / ARTIFACTS["weak-label"], _meta(cfg, "weak-label", categories=list(spec_order)),
                (l.to_json() for l in labels))


def read_weak_label(out_dir) -> Tuple[List[WeakLabel], List[str]]:
    meta, rows = read_artifact(out_dir, ARTIFACTS["weak-label"])
    return [WeakLabel(r["id"], r["category"], r["scores"]) for r in rows], list(meta["categories"])


def heldout_ids(doc_ids: Sequence[str], test_fraction: float, seed: int) -> set:
    """Seeded held-out subset of documents, excluded from classifier training."""
    n = len(doc_ids)
    if test_fraction <= 0 or n < 2:
        return set()
    n_test = int(math.floor(test_fraction * n + 0.5))
    order = list(range(n))
    random.Random(seed).shuffle(order)
    return {doc_ids[i] for i in order[:n_test]}


def run_train(cfg: RunConfig, docs, labels, spec_order):
    """Fit vocabulary and classifier on weak-labeled, non-held-out documents."""
    with stage_context("train"):
        held = heldout_ids([d.id for d in docs], cfg.test_fraction, cfg.seed)
        pairs = [
            (d, l.category) for d, l in zip(docs, labels)
            if l.category is not None and d.id not in held
        ]
        if not pairs:
            raise PipelineError("no trainable data: zero weak-labeled documents", stage="train")
        present = {c for _, c in pairs}
        names = [c for c in spec_order if c in present]
        if cfg.classifier == "svm" and len(names) < 2:
            raise PipelineError("no trainable data: fewer than 2 weak-labeled categories", stage="train")
        train_docs = [d for d, _ in pairs]
        vocab = fit_vocabulary(train_docs, cfg.min_count)
        index = {c: i for i, c in enumerate(names)}
        data = LabeledSet(
            [vectorize(d, vocab) for d in train_docs],
            [index[c] for _, c in pairs],
            names,
            len(vocab),
        )
        model = train(cfg.classifier, data, cfg.train_config(), cfg.smoothing)
    return vocab, model, len(pairs)


def write_train(out_dir, vocab, model):
    (out_dir / ARTIFACTS["vocab"]).write_text(vocab.dump(), encoding="utf-8", newline="\n")
    save_model(model, out_dir / ARTIFACTS["train"])


def read_train(out_dir):
    vocab = Vocabulary.load(require_file(out_dir, ARTIFACTS["vocab"]))
    model = load_model(require_file(out_dir, ARTIFACTS["train"]))
    if model.V != len(vocab):
        raise ValidationError(f"model width {model.V} does not match vocabulary size {len(vocab)}")
    return vocab, model


def run_classify(docs, vocab, model) -> List[dict]:
    with stage_context("classify"):
        preds = predict_many(model, [vectorize(d, vocab) for d in docs])
    kind = score_kind(model)
    names = model.category_names
    return [
        {
            "id": d.id,
            "category": names[c],
            "scores": {"kind": kind, "values": dict(zip(names, scores))},
        }
        for d, (c, scores) in zip(docs, preds)
    ]


def write_classify(cfg, out_dir, rows, model):
    write_jsonl(out_dir / ARTIFACTS["classify"],
                _meta(cfg, "classify", classifier=model.kind, categories=list(model.category_names)),
                rows)


def read_classify(out_dir) -> Tuple[dict, List[dict]]:
    return read_artifact(out_dir, ARTIFACTS["classify"])


def _metrics(pred_names, gold_names, spec_order):
    index = {c: i for i, c in enumerate(spec_order)}
    unknown = sorted({g for g in gold_names if g not in index})
    if unknown:
        raise ValidationError(f"gold labels name unknown categories: {unknown}")
    return evaluate([index[p] for p in pred_names], [index[g] for g in gold_names], len(spec_order))


def run_eval(cfg, counts, docs, labels, spec_order, classified, require_gold=False) -> dict:
    """Assemble the run report; gold-label metrics only when every document has a gold label."""
    with stage_context("eval"):
        pred = {row["id"]: row["category"] for row in classified}
        has_gold = bool(docs) and all(d.label is not None for d in docs)
        if require_gold and not has_gold:
            raise ValidationError("evaluation needs gold labels on every document")
        n_labeled = sum(1 for l in labels if l.category is not None)
        held = heldout_ids([d.id for d in docs], cfg.test_fraction, cfg.seed)
        trained_on = sum(1 for l in labels if l.category is not None and l.doc_id not in held)
        report = {
            "tool": "hca",
            "version": __version__,
            "seed": cfg.seed,
            "config": cfg.echo(),
            "counts": {
                "ingested": counts["ingested"],
                "filtered": counts["filtered"],
                "normalized": len(docs),
                "weak_labeled": n_labeled,
                "unlabeled": len(labels) - n_labeled,
                "trained_on": trained_on,
                "classified": len(classified),
            },
            "categories": list(spec_order),
            "weak_label_distribution": label_distribution(labels, spec_order),
            "predicted_distribution": {
                c: sum(1 for row in classified if row["category"] == c) for c in spec_order
            },
            "metrics": {},
        }
        weak_pairs = [(pred[l.doc_id], l.category) for l in labels if l.category is not None]
        if weak_pairs:
            report["metrics"]["vs_weak"] = _metrics(*zip(*weak_pairs), spec_order).to_json(spec_order)
        if has_gold:
            gold_all = _metrics([pred[d.id] for d in docs], [d.label for d in docs], spec_order)
            report["metrics"]["vs_gold"] = gold_all.to_json(spec_order)
            held_docs = [d for d in docs if d.id in held]
            if held_docs:
                report["metrics"]["vs_gold_heldout"] = _metrics(
                    [pred[d.id] for d in held_docs], [d.label for d in held_docs], spec_order
                ).to_json(spec_order)
    return report


def format_report(report: dict) -> str:
    c = report["counts"]
    lines = [
        f"hca {report['version']}  classifier={report['config']['classifier']}  seed={report['seed']}",
        "",
        "stage counts",
        f"  ingested      {c['ingested']}",
        f"  filtered      {c['filtered']}",
        f"  normalized    {c['normalized']}",
        f"  weak-labeled  {c['weak_labeled']}",
        f"  unlabeled     {c['unlabeled']}",
        f"  trained on    {c['trained_on']}",
        "",
        f"  {'category':<24}{'weak':>8}{'predicted':>11}",
    ]
    for cat in report["categories"]:
        lines.append(
            f"  {cat:<24}{report['weak_label_distribution'][cat]:>8}"
            f"{report['predicted_distribution'][cat]:>11}"
        )
    for key, title in (("vs_gold", "vs gold labels"), ("vs_gold_heldout", "vs gold labels (held out)"),
                       ("vs_weak", "vs weak labels")):
        m = report["metrics"].get(key)
        if not m:
            continue
        lines += ["", f"{title}: accuracy={m['accuracy']:.4f} macro_f1={m['macro_f1']:.4f}"]
        for name, p, r, f in zip(m["categories"], m["precision"], m["recall"], m["f1"]):
            lines.append(f"  {name:<24}P={p:.3f} R={r:.3f} F1={f:.3f}")
    return "\n".join(lines) + "\n"


def write_eval(out_dir, report):
    (out_dir / ARTIFACTS["eval"]).write_text(_dumps(report) + "\n", encoding="utf-8", newline="\n")
    (out_dir / ARTIFACTS["report-text"]).write_text(format_report(report), encoding="utf-8", newline="\n")


# ----------------------------------------------------------------------


def hca_run(cfg: RunConfig) -> dict:
    """Run every stage in memory, writing each stage's artifact along the way."""
    cfg.validate()
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    ds, counts = run_ingest(cfg)
    write_ingest(cfg, out_dir, ds, counts)
    docs = run_normalize(cfg, ds)
    write_normalize(cfg, out_dir, docs)
    corpus, spec_order = run_build_corpus(cfg, docs)
    write_build_corpus(out_dir, corpus)
    labels = run_weak_label(docs, corpus, spec_order)
    write_weak_label(cfg, out_dir, labels, spec_order)
    vocab, model, _ = run_train(cfg, docs, labels, spec_order)
    write_train(out_dir, vocab, model)
    classified = run_classify(docs, vocab, model)
    write_classify(cfg, out_dir, classified, model)
    report = run_eval(cfg, counts, docs, labels, spec_order, classified)
    write_eval(out_dir, report)
    return report
