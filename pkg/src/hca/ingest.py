"""Reading post datasets from jsonl/csv, hashtag filtering and splitting."""
import csv
import io
import json
import math
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InputFileError, ParseError, ValidationError

MAX_TEXT_LENGTH = 280
FORMATS = ("jsonl", "csv")

_HASHTAG_RE = re.compile(r"#(\w+)")


@dataclass(frozen=True)
class TweetRecord:
    id: str
    text: str
    hashtags: Tuple[str, ...] = ()
    label: Optional[str] = None

    def to_json(self) -> dict:
        out = {"id": self.id, "text": self.text, "hashtags": list(self.hashtags)}
        if self.label is not None:
            out["label"] = self.label
        return out


@dataclass
class Dataset:
    records: List[TweetRecord] = field(default_factory=list)
    source_path: str = ""

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def extract_hashtags(text: str) -> Tuple[str, ...]:
    """Return the lowercased '#'-prefixed word runs of `text`, in order."""
    return tuple(m.group(1).lower() for m in _HASHTAG_RE.finditer(text))


def _clean_hashtags(raw: Iterable[str]) -> Tuple[str, ...]:
    tags = []
    for tag in raw:
        tag = str(tag).strip().lstrip("#").lower()
        if tag and "#" not in tag:
            tags.append(tag)
    return tuple(tags)


def make_record(rec_id, text, hashtags=None, label=None) -> TweetRecord:
    """Build a validated record; hashtags fall back to a scan of `text`."""
    if rec_id is None or str(rec_id) == "":
        raise ValidationError("record id must be a non-empty string")
    rec_id = str(rec_id)
    if not isinstance(text, str):
        raise ValidationError(f"record {rec_id!r}: text must be a string")
    if len(text) > MAX_TEXT_LENGTH:
        raise ValidationError(
            f"record {rec_id!r}: text has {len(text)} code points (max {MAX_TEXT_LENGTH})"
        )
    tags = _clean_hashtags(hashtags or ())
    if not tags:
        tags = extract_hashtags(text)
    if label is not None:
        label = str(label)
        if label == "":
            label = None
    return TweetRecord(rec_id, text, tags, label)


def _read_jsonl(path: Path, text: str) -> List[TweetRecord]:
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(path, line_no, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "id" not in obj or "text" not in obj:
            raise ParseError(path, line_no, "expected an object with 'id' and 'text'")
        tags = obj.get("hashtags") or ()
        if isinstance(tags, str):
            tags = tags.split(";")
        try:
            records.append(make_record(obj["id"], obj["text"], tags, obj.get("label")))
        except ValidationError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    return records


def _read_csv(path: Path, text: str) -> List[TweetRecord]:
    reader = csv.DictReader(io.StringIO(text, newline=""))
    if reader.fieldnames is None:
        return []
    missing = {"id", "text"} - set(reader.fieldnames)
    if missing:
        raise ParseError(path, 1, f"missing required column(s): {', '.join(sorted(missing))}")
    records = []
    for row in reader:
        line_no = reader.line_num
        if None in row or any(row[k] is None for k in ("id", "text")):
            raise ParseError(path, line_no, "row does not match header width")
        tags = (row.get("hashtags") or "").split(";")
        try:
            records.append(make_record(row["id"], row["text"], tags, row.get("label")))
        except ValidationError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    return records


def read_dataset(path, format: str = "jsonl") -> Dataset:
    """Read a UTF-8 jsonl or csv dataset, preserving file order.

    Raises InputFileError when the file cannot be read, ParseError on a
    malformed line, ValidationError on a duplicate id.
    """
    if format not in FORMATS:
        raise ValidationError(f"unknown dataset format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read dataset {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise InputFileError(f"dataset {path} is not valid UTF-8") from None
    if text.startswith("\ufeff"):
        text = text[1:]
    records = _read_jsonl(path, text) if format == "jsonl" else _read_csv(path, text)
    seen = set()
    for rec in records:
        if rec.id in seen:
            raise ValidationError(f"duplicate record id {rec.id!r} in {path}")
        seen.add(rec.id)
    return Dataset(records, str(path))


def guess_format(path) -> str:
    return "csv" if str(path).lower().endswith(".csv") else "jsonl"


def filter_by_hashtags(ds: Dataset, wanted) -> Dataset:
    wanted = {w.lstrip("#").lower() for w in wanted}
    if not wanted:
        raise ValidationError("hashtag filter needs at least one hashtag")
    kept = [r for r in ds.records if wanted.intersection(r.hashtags)]
    return Dataset(kept, ds.source_path)


def split(ds: Dataset, test_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """Seeded shuffle split; each side keeps the original file order."""
    n = len(ds.records)
    if n < 2:
        raise ValidationError(f"need at least 2 records to split, got {n}")
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n_test = int(math.floor(test_fraction * n + 0.5))
    order = list(range(n))
    random.Random(seed).shuffle(order)
    test_idx = set(order[:n_test])
    train = [r for i, r in enumerate(ds.records) if i not in test_idx]
    test = [r for i, r in enumerate(ds.records) if i in test_idx]
    return Dataset(train, ds.source_path), Dataset(test, ds.source_path)


def write_jsonl(path, rows: Sequence[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=False))
            fh.write("\n")
