"""Splits, cross-validation, grid search and score reporting.

Every scalar in an EvaluationReport is derived from its confusion matrix
(rows = true, cols = predicted), so reports can always be recomputed and
checked. Macro averages weight classes equally; empty ratios (0/0) are 0.
Cross-validation reports pool the per-fold confusions and additionally
carry the mean +/- population std of the per-fold accuracies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import (
    DegenerateInputError,
    EmptyGridError,
    LabelTooSmallError,
    SingleGroupError,
    UnknownLabelError,
)


def _ratio(num: float, den: float) -> float:
    return float(num / den) if den else 0.0


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class EvaluationReport:
    labels: list[str]
    confusion: np.ndarray
    accuracy: float
    per_class: list[ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    folds: list["EvaluationReport"] | None = None
    fold_accuracy_mean: float | None = None
    fold_accuracy_std: float | None = None

    @classmethod
    def from_confusion(cls, labels: list[str], confusion: np.ndarray,
                       folds: list["EvaluationReport"] | None = None) -> "EvaluationReport":
        confusion = np.asarray(confusion, dtype=int)
        per_class = []
        for i, label in enumerate(labels):
            tp = float(confusion[i, i])
            precision = _ratio(tp, confusion[:, i].sum())
            recall = _ratio(tp, confusion[i, :].sum())
            f1 = _ratio(2.0 * precision * recall, precision + recall)
            per_class.append(ClassMetrics(label, precision, recall, f1,
                                          int(confusion[i, :].sum())))
        accuracy = _ratio(float(np.trace(confusion)), float(confusion.sum()))
        macro_p = float(np.mean([c.precision for c in per_class]))
        macro_r = float(np.mean([c.recall for c in per_class]))
        macro_f = float(np.mean([c.f1 for c in per_class]))
        fold_mean = fold_std = None
        if folds is not None:
            accs = np.array([f.accuracy for f in folds])
            fold_mean = float(accs.mean())
            fold_std = float(accs.std())
        return cls(list(labels), confusion, accuracy, per_class,
                   macro_p, macro_r, macro_f, folds, fold_mean, fold_std)

    def to_dict(self, include_folds: bool = True) -> dict:
        out = {
            "labels": list(self.labels),
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "accuracy": self.accuracy,
            "per_class": [
                {"label": c.label, "precision": c.precision, "recall": c.recall,
                 "f1": c.f1, "support": c.support}
                for c in self.per_class
            ],
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
        }
        if self.fold_accuracy_mean is not None:
            out["fold_accuracy_mean"] = self.fold_accuracy_mean
            out["fold_accuracy_std"] = self.fold_accuracy_std
        if include_folds and self.folds is not None:
            out["folds"] = [f.to_dict(include_folds=False) for f in self.folds]
        return out

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def to_csv(self, path) -> None:
        """Per-class rows plus trailing __macro__ and __accuracy__ rows."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("label,precision,recall,f1,support\n")
            for c in self.per_class:
                fh.write(f"{c.label},{c.precision!r},{c.recall!r},{c.f1!r},{c.support}\n")
            total = int(self.confusion.sum())
            fh.write(f"__macro__,{self.macro_precision!r},{self.macro_recall!r},"
                     f"{self.macro_f1!r},{total}\n")
            fh.write(f"__accuracy__,{self.accuracy!r},,,{total}\n")


def confusion_matrix(true_labels, predicted, axis_labels) -> np.ndarray:
    index = {label: i for i, label in enumerate(axis_labels)}
    c = len(axis_labels)
    out = np.zeros((c, c), dtype=int)
    for t, p in zip(true_labels, predicted):
        out[index[t], index[p]] += 1
    return out


def evaluate(model, features, labels) -> EvaluationReport:
    """Score a trained model; true labels must all be known to the model."""
    labels = list(labels)
    known = set(model.classes)
    unknown = sorted(set(labels) - known)
    if unknown:
        raise UnknownLabelError(f"labels not in training label set: {unknown}")
    predicted = model.predict(features)
    confusion = confusion_matrix(labels, predicted, model.classes)
    return EvaluationReport.from_confusion(list(model.classes), confusion)


def stratified_split(labels, train_fraction: float = 0.8, seed: int = 0):
    """Per-label proportional index split -> (train_indices, test_indices).

    Deterministic in seed; every label needs >= 2 items so both sides are
    nonempty for every label.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DegenerateInputError(f"train_fraction must be in (0, 1), got {train_fraction}")
    labels = list(labels)
    rng = np.random.default_rng(seed)
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in sorted(by_label):
        idx = np.array(by_label[label])
        if idx.size < 2:
            raise LabelTooSmallError(f"label {label!r} has {idx.size} item(s), need >= 2")
        shuffled = idx[rng.permutation(idx.size)]
        n_train = int(np.floor(train_fraction * idx.size + 0.5))
        n_train = min(max(n_train, 1), idx.size - 1)
        train_idx.extend(shuffled[:n_train].tolist())
        test_idx.extend(shuffled[n_train:].tolist())
    return sorted(train_idx), sorted(test_idx)


def split_corpus(corpus, train_fraction: float = 0.8, seed: int = 0):
    """Stratified (train corpus, test corpus) pair; see stratified_split."""
    train_idx, test_idx = stratified_split(corpus.labels(), train_fraction, seed)
    return corpus.subset(train_idx), corpus.subset(test_idx)


def _feature_rows(features) -> np.ndarray:
    X = np.asarray(getattr(features, "values", features), dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    return X


def stratified_folds(labels, k: int, seed: int = 0) -> list[list[int]]:
    """k stratified folds of item indices, deterministic in seed."""
    labels = list(labels)
    rng = np.random.default_rng(seed)
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    folds: list[list[int]] = [[] for _ in range(k)]
    for label in sorted(by_label):
        idx = np.array(by_label[label])
        if idx.size < k:
            raise LabelTooSmallError(f"label {label!r} has {idx.size} item(s), need >= {k}")
        shuffled = idx[rng.permutation(idx.size)]
        for pos, item in enumerate(shuffled.tolist()):
            folds[pos % k].append(item)
    return [sorted(f) for f in folds]


def kfold_cv(features, labels, trainer, k: int = 5, seed: int = 0) -> EvaluationReport:
    """Stratified k-fold CV; pooled confusion plus per-fold sub-reports."""
    labels = list(labels)
    if k < 2:
        raise DegenerateInputError(f"k must be >= 2, got {k}")
    X = _feature_rows(features)
    axis = sorted(set(labels))
    folds = stratified_folds(labels, k, seed)
    fold_reports = []
    pooled = np.zeros((len(axis), len(axis)), dtype=int)
    for test_idx in folds:
        test_set = set(test_idx)
        train_idx = [i for i in range(len(labels)) if i not in test_set]
        model = trainer(X[train_idx], [labels[i] for i in train_idx])
        predicted = model.predict(X[test_idx])
        confusion = confusion_matrix([labels[i] for i in test_idx], predicted, axis)
        pooled += confusion
        fold_reports.append(EvaluationReport.from_confusion(axis, confusion))
    return EvaluationReport.from_confusion(axis, pooled, folds=fold_reports)


def lopo_cv(features, labels, groups, trainer) -> EvaluationReport:
    """Leave-one-group-out CV: fold g trains on every group except g."""
    labels = list(labels)
    groups = list(groups)
    if len(groups) != len(labels):
        raise DegenerateInputError("groups length != labels length")
    distinct = sorted(set(groups))
    if len(distinct) < 2:
        raise SingleGroupError("need >= 2 distinct groups")
    X = _feature_rows(features)
    axis = sorted(set(labels))
    fold_reports = []
    pooled = np.zeros((len(axis), len(axis)), dtype=int)
    for g in distinct:
        test_idx = [i for i, gg in enumerate(groups) if gg == g]
        train_idx = [i for i, gg in enumerate(groups) if gg != g]
        model = trainer(X[train_idx], [labels[i] for i in train_idx])
        predicted = model.predict(X[test_idx])
        confusion = confusion_matrix([labels[i] for i in test_idx], predicted, axis)
        pooled += confusion
        fold_reports.append(EvaluationReport.from_confusion(axis, confusion))
    return EvaluationReport.from_confusion(axis, pooled, folds=fold_reports)


def grid_search(features, labels, trainer_family, grid, k: int = 5, seed: int = 0):
    """Exhaustive CV over a parameter grid -> (best params, its CV report).

    trainer_family(params) returns a trainer; best = highest mean fold
    accuracy, ties resolved to the earliest grid entry.
    """
    grid = list(grid)
    if not grid:
        raise EmptyGridError("parameter grid is empty")
    best_params = None
    best_report = None
    best_score = -np.inf
    for params in grid:
        report = kfold_cv(features, labels, trainer_family(params), k=k, seed=seed)
        score = report.fold_accuracy_mean
        if score > best_score:
            best_score = score
            best_params = params
            best_report = report
    return best_params, best_report
