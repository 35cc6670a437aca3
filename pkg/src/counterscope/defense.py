"""Countermeasures: trace-level noise injection and profiler-access detection.

Noise injection models the defender's dummy work at the level the attacker
sees (the counter traces): a Gaussian strategy widens every metric's noise
floor by a multiple of its simulator sigma, while a dummy-render strategy
superimposes the load response of Poisson-arriving throwaway objects.

Access detection gates on regularity: a log is flagged when it has enough
events, the inter-arrival coefficient of variation is small, and the median
period sits near the profiler's 1-second tick. Shifting all timestamps by a
constant changes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import MetricCatalog
from .errors import DataError, InvalidStrategyError
from .features import build_stat_features, fit_normalizer
from .models.evaluation import evaluate, stratified_split
from .seeding import derive_seed
from .simulator import COVERAGE_KAPPA, DEFAULT_PROFILE, MetricResponse, _GENERIC_RESPONSE
from .traces import LabeledCorpus, TraceSet

DEFAULT_MIN_EVENTS = 20
DEFAULT_CV_THRESHOLD = 0.1
DEFAULT_EXPECTED_PERIOD_S = 1.0
DEFAULT_PERIOD_TOLERANCE_S = 0.25


@dataclass(frozen=True)
class AccessLog:
    """Non-decreasing timestamps (seconds) of observed profiler reads."""

    timestamps: tuple[float, ...]

    def __post_init__(self):
        ts = tuple(float(t) for t in self.timestamps)
        if any(t < 0 for t in ts):
            raise DataError("timestamps must be nonnegative")
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise DataError("timestamps must be non-decreasing")
        object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return len(self.timestamps)


def read_access_log(path) -> AccessLog:
    """One decimal-seconds timestamp per line."""
    stamps = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                stamps.append(float(line))
    return AccessLog(tuple(stamps))


@dataclass(frozen=True)
class DetectionVerdict:
    flagged: bool
    estimated_period_s: float | None
    cv: float
    n_events: int

    def to_dict(self) -> dict:
        return {
            "flagged": self.flagged,
            "estimated_period_s": self.estimated_period_s,
            "cv": self.cv,
            "n_events": self.n_events,
        }


def detect_profiler_access(log: AccessLog, min_events: int = DEFAULT_MIN_EVENTS,
                           cv_threshold: float = DEFAULT_CV_THRESHOLD,
                           expected_period_s: float = DEFAULT_EXPECTED_PERIOD_S,
                           period_tolerance: float = DEFAULT_PERIOD_TOLERANCE_S) -> DetectionVerdict:
    """Flag a log iff it is long, regular, and near the expected period."""
    n = len(log)
    if n < 2:
        return DetectionVerdict(False, None, float("inf"), n)
    gaps = np.diff(np.asarray(log.timestamps))
    mean = float(gaps.mean())
    cv = float(gaps.std() / mean) if mean > 0 else float("inf")
    median = float(np.median(gaps))
    flagged = (n >= min_events
               and cv < cv_threshold
               and abs(median - expected_period_s) <= period_tolerance)
    return DetectionVerdict(flagged, median if flagged else None, cv, n)


@dataclass(frozen=True)
class GaussianNoise:
    """Adds N(0, sigma * sigma_i) per metric i; sigma 0 is the identity."""

    sigma: float
    seed: int = 0

    @property
    def level(self) -> float:
        return self.sigma

    def __post_init__(self):
        if self.sigma < 0:
            raise InvalidStrategyError("gaussian sigma must be >= 0")


@dataclass(frozen=True)
class DummyRender:
    """Superimposes the load response of Poisson-arriving static objects."""

    rate_per_s: float
    size_s: float = 2.0
    depth_z: float = 2.0
    seed: int = 0

    @property
    def level(self) -> float:
        return self.rate_per_s

    def __post_init__(self):
        if self.rate_per_s < 0:
            raise InvalidStrategyError("dummy-render rate must be >= 0")
        if self.size_s <= 0 or self.depth_z <= 0:
            raise InvalidStrategyError("dummy-render size/depth must be > 0")


NoiseStrategy = GaussianNoise | DummyRender


def inject_noise(trace: TraceSet, strategy: NoiseStrategy, catalog: MetricCatalog,
                 profile: dict[str, MetricResponse] | None = None,
                 seed: int | None = None) -> TraceSet:
    """Perturbed copy of a trace; shape (metrics, length) is preserved.

    Deterministic in the strategy seed (overridable via `seed`). Zero-level
    strategies return a bit-identical copy.
    """
    if not isinstance(strategy, (GaussianNoise, DummyRender)):
        raise InvalidStrategyError(f"unknown strategy {type(strategy).__name__}")
    profile = profile if profile is not None else DEFAULT_PROFILE
    rng_seed = strategy.seed if seed is None else seed
    matrix = trace.matrix.copy()
    if isinstance(strategy, GaussianNoise):
        if strategy.sigma > 0:
            rng = np.random.default_rng(rng_seed)
            noise = rng.standard_normal(matrix.shape)
            for j, m in enumerate(trace.metrics):
                resp = profile.get(m, _GENERIC_RESPONSE)
                matrix[:, j] += strategy.sigma * resp.sigma * noise[:, j]
    elif strategy.rate_per_s > 0:
        rng = np.random.default_rng(rng_seed)
        arrivals = rng.poisson(strategy.rate_per_s, matrix.shape[0])
        extra_load = np.clip(
            arrivals * COVERAGE_KAPPA * (strategy.size_s / strategy.depth_z) ** 2,
            0.0, 1.0)
        for j, m in enumerate(trace.metrics):
            if m in catalog:
                resp = profile.get(m, _GENERIC_RESPONSE)
                matrix[:, j] += catalog.get(m).sign * resp.g * extra_load
    return TraceSet(list(trace.metrics), matrix, trace.t0, dict(trace.meta))


@dataclass(frozen=True)
class CurvePoint:
    level: float
    accuracy: float
    macro_f1: float


@dataclass(frozen=True)
class DegradationCurve:
    points: tuple[CurvePoint, ...]

    def __post_init__(self):
        levels = [p.level for p in self.points]
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise DataError("noise levels must be strictly increasing")

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("level,accuracy,macro_f1\n")
            for p in self.points:
                fh.write(f"{p.level!r},{p.accuracy!r},{p.macro_f1!r}\n")


def evaluate_countermeasure(corpus: LabeledCorpus, trainer,
                            levels: list[NoiseStrategy], seed: int = 0,
                            train_fraction: float = 0.8,
                            catalog: MetricCatalog | None = None,
                            profile: dict[str, MetricResponse] | None = None,
                            layout: str = "stat4"):
    """Accuracy/macro-F1 of a fixed clean-trained model against perturbed tests.

    The train split stays clean; only test traces are perturbed, one curve
    point per strategy. Returns (DegradationCurve, clean EvaluationReport).
    """
    if not levels:
        raise DataError("need at least one noise level")
    from .catalog import builtin_catalog

    catalog = catalog if catalog is not None else builtin_catalog()
    train_idx, test_idx = stratified_split(corpus.labels(), train_fraction, seed)
    train = corpus.subset(train_idx)
    test = corpus.subset(test_idx)
    metrics = corpus.metrics
    norm = fit_normalizer(train, metrics)
    f_train = build_stat_features(train, metrics, norm, layout)
    model = trainer(f_train, train.labels())
    f_clean = build_stat_features(test, metrics, norm, layout)
    clean_report = evaluate(model, f_clean, test.labels())

    points = []
    for strategy in levels:
        perturbed_items = []
        for i, item in enumerate(test):
            noisy = inject_noise(item.trace, strategy, catalog, profile,
                                 seed=derive_seed(strategy.seed, i))
            perturbed_items.append(type(item)(noisy, item.label, item.group))
        perturbed = LabeledCorpus(perturbed_items)
        f_test = build_stat_features(perturbed, metrics, norm, layout)
        report = evaluate(model, f_test, test.labels())
        points.append(CurvePoint(float(strategy.level), report.accuracy, report.macro_f1))
    return DegradationCurve(tuple(points)), clean_report
