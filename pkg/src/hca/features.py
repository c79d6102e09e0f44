"""Frozen vocabulary and sparse term-count vectors."""
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import InputFileError, ParseError, ValidationError


class Vocabulary:
    """Word -> column index map, indices assigned in lexicographic word order."""

    def __init__(self, words: Iterable[str]):
        self.words: Tuple[str, ...] = tuple(sorted(set(words)))
        self.word_to_index: Dict[str, int] = {w: i for i, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.word_to_index

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.words == other.words

    def __repr__(self):
        return f"Vocabulary(V={len(self)})"

    @property
    def size(self) -> int:
        return len(self.words)

    def dump(self) -> str:
        return "".join(f"{w}\t{i}\n" for i, w in enumerate(self.words))

    @classmethod
    def load(cls, path) -> "Vocabulary":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputFileError(f"cannot read vocabulary {path}: {exc.strerror or exc}") from None
        words = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] != str(len(words)):
                raise ParseError(path, line_no, "expected 'word<TAB>index' with consecutive indices")
            words.append(parts[0])
        vocab = cls(words)
        if list(vocab.words) != words:
            raise ParseError(path, 1, "vocabulary is not in lexicographic order")
        return vocab


def fit_vocabulary(docs: Sequence, min_count: int = 1) -> Vocabulary:
    """Keep words whose total count across `docs` is at least `min_count`."""
    if not docs:
        raise ValidationError("cannot fit a vocabulary on zero documents")
    if min_count < 1:
        raise ValidationError(f"min_count must be >= 1, got {min_count}")
    totals = Counter()
    for doc in docs:
        totals.update(_tokens(doc))
    vocab = Vocabulary(w for w, n in totals.items() if n >= min_count)
    if len(vocab) == 0:
        raise ValidationError("vocabulary is empty after applying min_count")
    return vocab


def _tokens(doc):
    return doc.tokens if hasattr(doc, "tokens") else doc


@dataclass(frozen=True)
class FeatureVector:
    doc_id: str
    counts: Mapping[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())


def vectorize(doc, vocab: Vocabulary) -> FeatureVector:
    """Term counts over `vocab`; out-of-vocabulary tokens are dropped."""
    index = vocab.word_to_index
    counts = Counter(index[t] for t in _tokens(doc) if t in index)
    return FeatureVector(getattr(doc, "id", ""), dict(sorted(counts.items())))


def to_csr(vectors: Sequence[FeatureVector]):
    """Pack vectors into CSR arrays (indptr, indices, values), column-sorted per row."""
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    indices: List[int] = []
    values: List[float] = []
    for row, vec in enumerate(vectors):
        for col in sorted(vec.counts):
            indices.append(col)
            values.append(float(vec.counts[col]))
        indptr[row + 1] = len(indices)
    return (
        indptr,
        np.asarray(indices, dtype=np.int64),
        np.asarray(values, dtype=np.float64),
    )
