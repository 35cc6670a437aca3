"""Trace data model and bit-exact I/O.

A TraceSet is a rectangular block of 1 Hz samples: one column per metric,
one row per second, starting at integer offset t0. Equality compares the
structural content (metric list, t0, values bit-for-bit); the free-form
meta map is an annotation and does not participate.

Wide CSV is the canonical on-disk format: header ``t_s,<id1>,<id2>,...``,
one row per second, LF line endings, no quoting. Values are written with
Python's shortest round-trip float repr, so write -> read reproduces every
value bit-for-bit. Labeled corpora are described by a JSON-lines manifest,
one ``{"trace": <relative path>, "label": ..., "group": ...}`` per line.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DataError,
    InconsistentMetricsError,
    MissingTraceFileError,
    ParseError,
    RaggedRowsError,
    SchemaError,
    TooShortError,
)


@dataclass(frozen=True)
class MetricTrace:
    """A single metric's 1 Hz series; sample k is at second t0 + k."""

    metric: str
    samples: np.ndarray
    t0: int = 0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise DataError(f"{self.metric}: samples must be a nonempty 1-D series")
        if not np.all(np.isfinite(samples)):
            raise DataError(f"{self.metric}: samples contain NaN/Inf")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


@dataclass
class TraceSet:
    """Aligned multi-metric 1 Hz trace block (n_seconds x n_metrics)."""

    metrics: list[str]
    matrix: np.ndarray
    t0: int = 0
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.metrics = list(self.metrics)
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.ndim != 2:
            raise DataError("matrix must be 2-D (seconds x metrics)")
        if matrix.shape[0] < 1:
            raise DataError("trace must contain at least one second")
        if matrix.shape[1] != len(self.metrics):
            raise DataError(
                f"matrix has {matrix.shape[1]} columns for {len(self.metrics)} metrics")
        if len(set(self.metrics)) != len(self.metrics):
            raise DataError("duplicate metric ids")
        if not np.all(np.isfinite(matrix)):
            raise DataError("matrix contains NaN/Inf")
        self.matrix = matrix

    @property
    def n_seconds(self) -> int:
        return self.matrix.shape[0]

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def column(self, metric: str) -> MetricTrace:
        try:
            j = self.metrics.index(metric)
        except ValueError:
            raise KeyError(metric) from None
        return MetricTrace(metric, self.matrix[:, j].copy(), self.t0)

    def values(self, metric: str) -> np.ndarray:
        return self.matrix[:, self.metrics.index(metric)]

    def select(self, metrics: list[str]) -> "TraceSet":
        """Sub-TraceSet with the given metric columns, in the given order."""
        cols = [self.metrics.index(m) for m in metrics]
        return TraceSet(list(metrics), self.matrix[:, cols].copy(), self.t0, dict(self.meta))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TraceSet):
            return NotImplemented
        return (self.metrics == other.metrics
                and self.t0 == other.t0
                and self.matrix.shape == other.matrix.shape
                and bool(np.array_equal(self.matrix, other.matrix)))


@dataclass(frozen=True)
class CorpusItem:
    trace: TraceSet
    label: str
    group: str = ""


@dataclass
class LabeledCorpus:
    """Labeled TraceSets sharing one metric list; group carries identity for LOPO."""

    items: list[CorpusItem]

    def __post_init__(self):
        self.items = list(self.items)
        if self.items:
            first = self.items[0].trace.metrics
            for i, it in enumerate(self.items):
                if it.trace.metrics != first:
                    raise InconsistentMetricsError(
                        f"item {i} metric list differs from item 0")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def metrics(self) -> list[str]:
        if not self.items:
            return []
        return list(self.items[0].trace.metrics)

    def labels(self) -> list[str]:
        return [it.label for it in self.items]

    def groups(self) -> list[str]:
        return [it.group for it in self.items]

    def distinct_labels(self) -> list[str]:
        return sorted(set(self.labels()))

    def subset(self, indices) -> "LabeledCorpus":
        return LabeledCorpus([self.items[i] for i in indices])

    def concat_metric(self, metric: str) -> np.ndarray:
        """All items' samples for one metric, concatenated in corpus order."""
        return np.concatenate([it.trace.values(metric) for it in self.items])


def _format_value(v: float) -> str:
    return repr(float(v))


def write_wide_csv(trace: TraceSet, path) -> None:
    """Write the wide-CSV form of a trace (values round-trip bit-exactly)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_s," + ",".join(trace.metrics) + "\n")
        for k in range(trace.n_seconds):
            row = [str(trace.t0 + k)]
            row.extend(_format_value(v) for v in trace.matrix[k])
            fh.write(",".join(row) + "\n")


def read_wide_csv(path, meta: dict[str, str] | None = None) -> TraceSet:
    """Parse a wide-CSV trace; columns keep header order, t0 is the first row.

    Raises ParseError(row, col) on non-numeric/non-finite cells or a broken
    time column, RaggedRowsError on inconsistent row widths.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        fields = header.split(",")
        if len(fields) < 2 or fields[0] != "t_s":
            raise SchemaError(f"{path}: header must be 't_s,<id1>,...'")
        metrics = fields[1:]
        width = len(fields)
        rows = []
        times = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != width:
                raise RaggedRowsError(
                    f"{path}: row {lineno} has {len(cells)} cells, expected {width}")
            try:
                t = int(cells[0])
            except ValueError:
                raise ParseError(lineno, 1, f"bad time value {cells[0]!r}") from None
            times.append(t)
            vals = []
            for col, cell in enumerate(cells[1:], start=2):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(lineno, col, f"non-numeric cell {cell!r}") from None
                if not np.isfinite(v):
                    raise ParseError(lineno, col, f"non-finite cell {cell!r}")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    t0 = times[0]
    for k, t in enumerate(times):
        if t != t0 + k:
            raise ParseError(k + 2, 1, f"time column not 1 Hz consecutive at t={t}")
    return TraceSet(metrics, np.array(rows, dtype=float), t0, dict(meta or {}))


def write_manifest(corpus: LabeledCorpus, directory, manifest_name: str = "manifest.jsonl",
                   trace_subdir: str = "traces") -> str:
    """Write every trace as wide CSV plus a JSON-lines manifest; returns manifest path.

    Trace filenames are derived from (index, label) so output is deterministic.
    """
    directory = os.fspath(directory)
    tdir = os.path.join(directory, trace_subdir)
    os.makedirs(tdir, exist_ok=True)
    manifest_path = os.path.join(directory, manifest_name)
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        for i, item in enumerate(corpus):
            safe_label = "".join(c if c.isalnum() else "_" for c in item.label)
            rel = f"{trace_subdir}/{i:04d}_{safe_label}.csv"
            write_wide_csv(item.trace, os.path.join(directory, rel))
            fh.write(json.dumps(
                {"trace": rel, "label": item.label, "group": item.group}) + "\n")
    return manifest_path


def read_manifest(path) -> LabeledCorpus:
    """Load a corpus from a JSON-lines manifest, in manifest order.

    Trace paths resolve relative to the manifest's directory."""
    path = os.fspath(path)
    base = os.path.dirname(os.path.abspath(path))
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: bad JSON: {exc}") from exc
            if "trace" not in obj or "label" not in obj:
                raise SchemaError(f"{path}:{lineno}: needs 'trace' and 'label'")
            tpath = os.path.join(base, obj["trace"])
            if not os.path.exists(tpath):
                raise MissingTraceFileError(tpath)
            trace = read_wide_csv(tpath)
            items.append(CorpusItem(trace, str(obj["label"]), str(obj.get("group", ""))))
    return LabeledCorpus(items)


def truncate_align(corpus: LabeledCorpus, n: int) -> LabeledCorpus:
    """Prefix-truncate every trace to exactly n seconds (idempotent at fixed n)."""
    if n < 1:
        raise DataError(f"n must be >= 1, got {n}")
    items = []
    for i, item in enumerate(corpus):
        if item.trace.n_seconds < n:
            raise TooShortError(
                f"item {i}: trace has {item.trace.n_seconds} s, need {n}")
        t = item.trace
        items.append(dataclasses.replace(
            item, trace=TraceSet(t.metrics, t.matrix[:n].copy(), t.t0, dict(t.meta))))
    return LabeledCorpus(items)
