"""Metric selection: accuracy screening and pairwise correlation pruning.

Pruning walks metric pairs (i, j), i < j in catalog order, over the
concatenated raw reference series and drops the second metric of every pair
whose |r| exceeds the threshold while both are still retained. Greedy
drop-second needs no transitive re-check: a drop only removes candidates.
Screening rates each metric alone by training a classifier on its stat
features and keeping the ones that beat an accuracy floor.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from . import features as feats
from .errors import DataError, InsufficientLabelsError, UnknownMetricError
from .stats import pearson
from .traces import LabeledCorpus

DEFAULT_PRUNE_THRESHOLD = 0.90
DEFAULT_SCREEN_THRESHOLD = 0.60
PROFILER_METRIC_CAP = 30  # concurrent real-time counters the profiler tolerates


@dataclass(frozen=True)
class DroppedPair:
    kept: str
    dropped: str
    r: float


@dataclass(frozen=True)
class PruneReport:
    retained: tuple[str, ...]
    dropped: tuple[DroppedPair, ...]

    def retained_ids(self) -> list[str]:
        return list(self.retained)

    def dropped_ids(self) -> list[str]:
        return [d.dropped for d in self.dropped]

    def to_dict(self) -> dict:
        return {
            "retained": list(self.retained),
            "dropped": [{"kept": d.kept, "dropped": d.dropped, "r": d.r}
                        for d in self.dropped],
        }

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def correlation_prune(reference: LabeledCorpus, catalog_order: list[str],
                      threshold: float = DEFAULT_PRUNE_THRESHOLD) -> PruneReport:
    """Drop the second metric of every |r| > threshold pair, catalog order.

    Correlations are computed on each metric's columns concatenated across
    all reference items, un-normalized.
    """
    if not 0.0 < threshold <= 1.0:
        raise DataError(f"threshold must be in (0, 1], got {threshold}")
    if len(reference) == 0:
        raise DataError("empty reference corpus")
    corpus_metrics = set(reference.metrics)
    unknown = corpus_metrics.difference(catalog_order)
    if unknown:
        raise UnknownMetricError(f"corpus metrics not in catalog order: {sorted(unknown)}")
    ordered = [m for m in catalog_order if m in corpus_metrics]

    series = {m: reference.concat_metric(m) for m in ordered}
    retained = list(ordered)
    alive = {m: True for m in ordered}
    dropped: list[DroppedPair] = []
    for a in range(len(ordered)):
        mi = ordered[a]
        if not alive[mi]:
            continue
        for b in range(a + 1, len(ordered)):
            mj = ordered[b]
            if not alive[mj]:
                continue
            r = pearson(series[mi], series[mj])
            if abs(r) > threshold:
                alive[mj] = False
                dropped.append(DroppedPair(mi, mj, r))
    retained = [m for m in ordered if alive[m]]
    return PruneReport(tuple(retained), tuple(dropped))


def accuracy_screen(corpus: LabeledCorpus, trainer, threshold_acc: float = DEFAULT_SCREEN_THRESHOLD,
                    split_seed: int = 0, train_fraction: float = 0.8,
                    metrics: list[str] | None = None) -> list[tuple[str, float]]:
    """Score each metric alone and keep those with accuracy > threshold_acc.

    trainer is a classifier factory: trainer(features, labels) -> model with
    a predict(features) method. Results are sorted by accuracy descending,
    ties broken by the corpus metric order (catalog order).
    """
    from .models.evaluation import evaluate, stratified_split

    if not 0.0 < threshold_acc <= 1.0:
        raise DataError(f"threshold_acc must be in (0, 1], got {threshold_acc}")
    if len(set(corpus.labels())) < 2:
        raise InsufficientLabelsError("screening needs >= 2 labels")
    metric_list = list(metrics) if metrics is not None else corpus.metrics
    order = {m: i for i, m in enumerate(metric_list)}

    train_idx, test_idx = stratified_split(corpus.labels(), train_fraction, split_seed)
    train = corpus.subset(train_idx)
    test = corpus.subset(test_idx)

    passing: list[tuple[str, float]] = []
    for m in metric_list:
        norm = feats.fit_normalizer(train, [m])
        f_train = feats.build_stat_features(train, [m], norm)
        f_test = feats.build_stat_features(test, [m], norm)
        model = trainer(f_train, train.labels())
        report = evaluate(model, f_test, test.labels())
        if report.accuracy > threshold_acc:
            passing.append((m, report.accuracy))
    passing.sort(key=lambda pair: (-pair[1], order[pair[0]]))
    return passing


def enforce_cap(ids: list[str], cap: int = PROFILER_METRIC_CAP) -> list[str]:
    """First `cap` ids in the given order; warns when the list is truncated."""
    ids = list(ids)
    if len(ids) > cap:
        warnings.warn(
            f"metric list truncated from {len(ids)} to the profiler cap of {cap}",
            UserWarning, stacklevel=2)
        return ids[:cap]
    return ids


def intersect_metrics(ids: list[str], other: list[str]) -> list[str]:
    """Set intersection preserving the order of the first list."""
    other_set = set(other)
    return [m for m in ids if m in other_set]
