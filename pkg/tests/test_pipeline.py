import json
from pathlib import Path

import pytest

from hca import pipeline as P
from hca.cli import main
from hca.errors import PipelineError, ValidationError

STAGES = ["ingest", "normalize", "build-corpus", "weak-label", "train", "classify", "eval"]


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")


@pytest.fixture
def small_run(planted_dir, tmp_path):
    cfg = P.RunConfig.from_file(planted_dir / "config.yaml", output_dir=str(tmp_path / "out"), epochs=60)
    return cfg, P.hca_run(cfg)


def test_report_count_identities(small_run):
    cfg, report = small_run
    c = report["counts"]
    assert c["filtered"] <= c["ingested"]
    assert c["weak_labeled"] + c["unlabeled"] == c["normalized"] == c["classified"]
    assert c["trained_on"] <= c["weak_labeled"]
    assert sum(report["weak_label_distribution"].values()) == c["weak_labeled"]
    assert sum(report["predicted_distribution"].values()) == c["classified"]
    assert report["config"] == cfg.echo()
    assert {"vs_gold", "vs_gold_heldout", "vs_weak"} <= set(report["metrics"])


def test_every_artifact_records_seed_and_config(small_run):
    cfg, _ = small_run
    out = Path(cfg.output_dir)
    for name in ("ingested.jsonl", "normalized.jsonl", "weak_labels.jsonl", "classified.jsonl"):
        meta = json.loads((out / name).read_text(encoding="utf-8").splitlines()[0])["_meta"]
        assert meta["seed"] == cfg.seed and meta["config"] == cfg.echo()
    report = json.loads((out / "report.jsonl").read_text(encoding="utf-8"))
    assert report["seed"] == cfg.seed


def test_classified_rows_shape(small_run):
    cfg, _ = small_run
    _, rows = P.read_classify(Path(cfg.output_dir))
    assert set(rows[0]) == {"id", "category", "scores"}


def test_no_trainable_data_when_hashtags_miss(planted_dir, tmp_path):
    cfg = P.RunConfig.from_file(planted_dir / "config.yaml", output_dir=str(tmp_path), hashtags=("nothere",))
    with pytest.raises(PipelineError, match="no trainable data") as exc:
        P.hca_run(cfg)
    assert exc.value.stage == "train"


def test_unknown_config_key(tmp_path):
    (tmp_path / "c.yaml").write_text("bogus: 1\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="bogus"):
        P.RunConfig.from_file(tmp_path / "c.yaml")


def test_gold_labels_never_reach_training(planted_dir, tmp_path):
    # relabel every gold record with one category: training must not change
    base = P.RunConfig.from_file(planted_dir / "config.yaml", output_dir=str(tmp_path / "a"), epochs=30)
    P.hca_run(base)
    rows = [json.loads(l) for l in (planted_dir / "dataset.jsonl").read_text(encoding="utf-8").splitlines()]
    first = rows[0]["label"]
    for r in rows:
        r["label"] = first
    write_jsonl(tmp_path / "relabeled.jsonl", rows)
    other = P.RunConfig.from_file(
        planted_dir / "config.yaml", output_dir=str(tmp_path / "b"), epochs=30,
        dataset=str(tmp_path / "relabeled.jsonl"),
    )
    P.hca_run(other)
    assert (tmp_path / "a" / "model.txt").read_bytes() == (tmp_path / "b" / "model.txt").read_bytes()


# ---------------------------------------------------------------- cli


def test_cli_normalize_one_record(tmp_path, capsys):
    write_jsonl(tmp_path / "d.jsonl", [{"id": "1", "text": "RT @bob Exam is sooo g8 #engineeringproblems"}])
    out = tmp_path / "out"
    assert main(["ingest", "--dataset", str(tmp_path / "d.jsonl"), "-o", str(out)]) == 0
    assert main(["normalize", "-o", str(out)]) == 0
    lines = (out / "normalized.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    row = json.loads(lines[1])
    assert row["id"] == "1" and row["tokens"] == ["exam", "great"]  # "sooo" -> "so", a stop word


def test_cli_missing_artifact_names_stage(tmp_path, capsys):
    assert main(["weak-label", "-o", str(tmp_path)]) == 3
    err = capsys.readouterr().err
    assert "normalize" in err


def test_cli_eval_without_gold_is_validation_error(tmp_path, capsys):
    rows = [{"id": str(i), "text": t + " #engineeringproblems"} for i, t in enumerate(
        ["exam stress again", "exam tomorrow", "love learning", "learning fun", "no sleep", "sleepy again"])]
    write_jsonl(tmp_path / "d.jsonl", rows)
    out = str(tmp_path / "out")
    common = ["-o", out, "--dataset", str(tmp_path / "d.jsonl"), "--epochs", "5", "--test-fraction", "0"]
    for stage in STAGES[:-1]:
        assert main([stage, *common]) == 0, stage
    assert main(["eval", *common]) == 2
    assert "gold" in capsys.readouterr().err


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["run", "--dataset", str(tmp_path / "missing.jsonl"), "-o", str(tmp_path)]) == 3
    (tmp_path / "bad.yaml").write_text("classifier: tree\n", encoding="utf-8")
    write_jsonl(tmp_path / "d.jsonl", [{"id": "1", "text": "x #engineeringproblems"}])
    assert main(["run", "-c", str(tmp_path / "bad.yaml"), "--dataset", str(tmp_path / "d.jsonl")]) == 2
    assert main(["run", "--dataset", str(tmp_path / "d.jsonl"), "-o", str(tmp_path / "o")]) == 4
    assert "no trainable data" in capsys.readouterr().err


def test_cli_synth_and_run(tmp_path, capsys):
    assert main(["synth", str(tmp_path / "syn"), "--per-category", "20"]) == 0
    assert main(["run", "-c", str(tmp_path / "syn" / "config.yaml"), "-o", str(tmp_path / "o"),
                 "--classifier", "nb"]) == 0
    assert "vs gold labels" in capsys.readouterr().out
    assert (tmp_path / "o" / "report.txt").is_file()



@pytest.mark.parametrize("kind", ["nb", "maxent", "svm"])
def test_backends_give_identical_artifacts(planted_dir, tmp_path, monkeypatch, kind):
    from hca import kernels

    if "cython" not in kernels.available_backends():
        pytest.skip("compiled extension not built")
    outputs = {}
    for name in ("cython", "python"):
        impl = kernels.load_backend(name)
        for fn in ("class_counts", "linear_scores", "maxent_loss_grad", "svm_train_binary"):
            monkeypatch.setattr(kernels, fn, getattr(impl, fn))
        cfg = P.RunConfig.from_file(planted_dir / "config.yaml", output_dir=str(tmp_path / name),
                                    classifier=kind, epochs=40)
        P.hca_run(cfg)
        outputs[name] = {p.name: p.read_bytes() for p in (tmp_path / name).iterdir()}
    assert outputs["cython"] == outputs["python"]
