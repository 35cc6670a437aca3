"""k-nearest-neighbor classifier (Euclidean, vote ties to lowest class index)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInputError
from .forest import _as_matrix, encode_labels


@dataclass
class KnnModel:
    classes: list[str]
    k: int
    train_x: np.ndarray
    train_y: np.ndarray  # class indices

    def predict(self, features) -> list[str]:
        X = _as_matrix(features, self.train_x.shape[1])
        out = []
        for x in X:
            d2 = np.sum((self.train_x - x) ** 2, axis=1)
            # stable sort: equidistant neighbors resolve by training order
            nearest = np.argsort(d2, kind="stable")[: self.k]
            votes = np.bincount(self.train_y[nearest], minlength=len(self.classes))
            out.append(self.classes[int(np.argmax(votes))])
        return out

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "k": self.k,
            "train_x": [[float(v) for v in row] for row in self.train_x],
            "train_y": [int(v) for v in self.train_y],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "KnnModel":
        return cls(list(obj["classes"]), int(obj["k"]),
                   np.asarray(obj["train_x"], dtype=float),
                   np.asarray(obj["train_y"], dtype=int))


def train_knn(features, labels, k: int = 5) -> KnnModel:
    X = _as_matrix(features)
    labels = list(labels)
    if X.shape[0] != len(labels):
        raise DegenerateInputError("features rows != labels length")
    if k < 1 or k > X.shape[0]:
        raise DegenerateInputError(f"k={k} outside [1, {X.shape[0]}]")
    classes, y_idx = encode_labels(labels)
    return KnnModel(classes, k, X.copy(), y_idx)
