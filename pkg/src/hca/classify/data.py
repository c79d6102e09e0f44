"""Training data container and optimizer settings."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from ..features import FeatureVector, to_csr


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 300
    learning_rate: float = 0.5
    l2: float = 1e-3
    seed: int = 0
    tolerance: float = 1e-6

    def __post_init__(self):
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ValidationError(f"epochs must be a positive integer, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ValidationError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not self.l2 >= 0:
            raise ValidationError(f"l2 must be >= 0, got {self.l2}")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be > 0, got {self.tolerance}")


class LabeledSet:
    """Feature vectors with parallel category indices in [0, m)."""

    def __init__(
        self,
        vectors: Sequence[FeatureVector],
        labels: Sequence[int],
        category_names: Sequence[str],
        n_features: int,
    ):
        self.vectors = list(vectors)
        self.labels = [int(l) for l in labels]
        self.category_names = list(category_names)
        self.n_features = int(n_features)
        if not self.vectors:
            raise ValidationError("labeled set is empty")
        if len(self.vectors) != len(self.labels):
            raise ValidationError(
                f"{len(self.vectors)} vectors but {len(self.labels)} labels"
            )
        if len(set(self.category_names)) != len(self.category_names) or not self.category_names:
            raise ValidationError("category names must be unique and non-empty")
        bad = [l for l in self.labels if not 0 <= l < self.m]
        if bad:
            raise ValidationError(f"labels out of range [0, {self.m}): {sorted(set(bad))}")
        for vec in self.vectors:
            if any(not 0 <= i < self.n_features for i in vec.counts):
                raise ValidationError(f"vector {vec.doc_id!r} has an index outside [0, {self.n_features})")
        self._csr = None

    @property
    def m(self) -> int:
        return len(self.category_names)

    @property
    def n(self) -> int:
        return len(self.vectors)

    def csr(self):
        if self._csr is None:
            self._csr = to_csr(self.vectors)
        return self._csr

    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def require_all_classes(self) -> None:
        present = set(self.labels)
        missing = [self.category_names[c] for c in range(self.m) if c not in present]
        if missing:
            raise ValidationError(f"categories without training examples: {missing}")


def argmax_lowest(row) -> int:
    """Index of the largest entry; ties resolve to the lowest index."""
    best = 0
    for c in range(1, len(row)):
        if row[c] > row[best]:
            best = c
    return best


def check_width(indices: np.ndarray, n_features: int) -> None:
    if indices.size and int(indices.max()) >= n_features:
        raise ValidationError(
            f"feature index {int(indices.max())} outside model width {n_features}"
        )
