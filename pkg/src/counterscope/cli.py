"""Command-line entry point wiring the pipeline into reproducible runs.

Every subcommand writes its results plus an effective_config.json echo of
the resolved configuration into --out. Outputs are deterministic for a
fixed seed. Configuration precedence: flags > --config file > built-in
defaults; the COUNTERSCOPE_SEED environment variable replaces the built-in
default seed.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 internal
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import plots
from .catalog import builtin_catalog, load_catalog
from .defense import (
    DummyRender,
    GaussianNoise,
    detect_profiler_access,
    evaluate_countermeasure,
    inject_noise,
    read_access_log,
)
from .errors import DataError
from .features import (
    LAYOUT_SEQUENCE,
    LAYOUT_STAT4,
    build_sequences,
    build_stat_features,
    fit_normalizer,
)
from .models import (
    evaluate,
    grid_search,
    kfold_cv,
    load_model,
    lopo_cv,
    save_model,
    train_knn,
    train_linear_svm,
    train_mlp,
    train_rf,
)
from .selection import accuracy_screen, correlation_prune
from .simulator import (
    builtin_profile,
    generate_corpus,
    load_corpus_spec,
    load_profile,
    load_script,
    simulate,
)
from .stats import linreg, pearson
from .stepcount import default_min_jumps, detect_steps
from .traces import read_manifest, read_wide_csv, write_manifest, write_wide_csv

SEED_ENV_VAR = "COUNTERSCOPE_SEED"
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_FINGERPRINT_METRICS = ("non_base_level_textures", "texture_l2_miss",
                        "gpu_bus_busy", "prims_trivially_rejected")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2 for
    # data errors, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DataError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return 0


class RunConfig:
    """Resolved configuration: flag > config-file key > built-in default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_values = {}
        if getattr(args, "config", None):
            with open(args.config, "r", encoding="utf-8") as fh:
                self.file_values = json.load(fh)
            if not isinstance(self.file_values, dict):
                raise DataError(f"{args.config}: config file must be a JSON object")
        self.resolved = {}

    def get(self, key: str, default=None):
        value = getattr(self.args, key, None)
        if value is None:
            value = self.file_values.get(key, default)
        self.resolved[key] = value
        return value

    def seed(self) -> int:
        return int(self.get("seed", _default_seed()))

    def out_dir(self) -> str:
        out = getattr(self.args, "out")
        os.makedirs(out, exist_ok=True)
        self.resolved["out"] = out
        return out

    def catalog(self):
        path = self.get("catalog", None)
        return load_catalog(path) if path else builtin_catalog()

    def profile(self):
        path = self.get("profile", None)
        return load_profile(path) if path else builtin_profile()

    def write_effective(self, out_dir: str, command: str) -> None:
        payload = {"command": command}
        payload.update(self.resolved)
        with open(os.path.join(out_dir, "effective_config.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# trainer construction shared by train/cv/lopo/grid/screen


def _trainer_factory(model_name: str, cfg: RunConfig, seed: int):
    if model_name == "rf":
        params = {"n_trees": int(cfg.get("trees", 100)),
                  "max_depth": cfg.get("max_depth", None),
                  "seed": seed}
        if params["max_depth"] is not None:
            params["max_depth"] = int(params["max_depth"])
        return lambda X, y: train_rf(X, y, **params), params
    if model_name == "svm":
        params = {"lr": float(cfg.get("lr", 0.01)),
                  "epochs": int(cfg.get("epochs", 50)),
                  "reg_lambda": float(cfg.get("reg_lambda", 1e-3)),
                  "seed": seed}
        return lambda X, y: train_linear_svm(X, y, **params), params
    if model_name == "knn":
        params = {"k": int(cfg.get("neighbors", 5))}
        return lambda X, y: train_knn(X, y, **params), params
    if model_name == "mlp":
        params = {"hidden_size": int(cfg.get("hidden", 32)),
                  "learning_rate": float(cfg.get("lr", 0.05)),
                  "epochs": int(cfg.get("epochs", 100)),
                  "batch_size": int(cfg.get("batch", 16)),
                  "seed": seed}
        return lambda X, y: train_mlp(X, y, **params), params
    raise DataError(f"unknown model {model_name!r}")


def _build_features(corpus, metrics, norm, layout):
    if layout == LAYOUT_SEQUENCE:
        return build_sequences(corpus, metrics, norm)
    return build_stat_features(corpus, metrics, norm, layout)


def _fit_width(values: np.ndarray, width: int) -> np.ndarray:
    if values.shape[1] == width:
        return values
    out = np.zeros((values.shape[0], width))
    keep = min(width, values.shape[1])
    out[:, :keep] = values[:, :keep]
    return out


def _report_outputs(report, out_dir: str) -> None:
    report.to_json(os.path.join(out_dir, "report.json"))
    report.to_csv(os.path.join(out_dir, "report.csv"))
    plots.heatmap(report.confusion, report.labels, report.labels,
                  os.path.join(out_dir, "confusion.svg"),
                  title="confusion matrix (rows=true, cols=predicted)")


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    script = load_script(cfg.args.scene)
    catalog = cfg.catalog()
    result = simulate(script, catalog, cfg.profile())
    write_wide_csv(result.traces, os.path.join(out, "trace.csv"))
    from .traces import TraceSet

    pixels = TraceSet(["pixels"], result.ground_truth_pixels.reshape(-1, 1))
    write_wide_csv(pixels, os.path.join(out, "pixels.csv"))
    _write_json(os.path.join(out, "events.json"),
                [{"kind": ev.kind, "t_start": ev.t_start, "t_end": ev.t_end,
                  "detail": ev.detail} for ev in result.event_log])
    t = np.arange(result.traces.n_seconds)
    shown = [m for m in _FINGERPRINT_METRICS if m in result.traces.metrics]
    if shown:
        plots.line_plot({m: (t, result.traces.values(m)) for m in shown},
                        os.path.join(out, "fingerprint.svg"),
                        title="simulated metric fingerprint",
                        x_label="seconds", y_label="normalized value",
                        normalize=True)
    cfg.write_effective(out, "simulate")
    print(f"simulated {result.traces.n_seconds}s x {len(result.traces.metrics)} metrics -> {out}")
    return EXIT_OK


def cmd_gen_corpus(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    spec = load_corpus_spec(cfg.args.corpus_spec)
    seed_flag = cfg.get("seed", None)
    if seed_flag is not None:
        import dataclasses

        spec = dataclasses.replace(spec, seed=int(seed_flag))
    corpus = generate_corpus(spec, cfg.catalog(), cfg.profile())
    manifest = write_manifest(corpus, out)
    cfg.write_effective(out, "gen-corpus")
    print(f"wrote {len(corpus)} traces and {manifest}")
    return EXIT_OK


def cmd_prune(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    catalog = cfg.catalog()
    threshold = float(cfg.get("threshold", 0.90))
    report = correlation_prune(corpus, catalog.ids(), threshold)
    report.to_json(os.path.join(out, "prune_report.json"))
    cfg.write_effective(out, "prune")
    print(f"retained {len(report.retained)} of "
          f"{len(report.retained) + len(report.dropped)} metrics "
          f"(threshold {threshold})")
    for d in report.dropped:
        print(f"  dropped {d.dropped} (r={d.r:+.3f} with {d.kept})")
    return EXIT_OK


def cmd_screen(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    seed = cfg.seed()
    threshold = float(cfg.get("threshold_acc", 0.60))
    trainer, _ = _trainer_factory("rf", cfg, seed)
    passing = accuracy_screen(corpus, trainer, threshold, seed)
    _write_json(os.path.join(out, "screened_metrics.json"),
                [{"metric": m, "accuracy": a} for m, a in passing])
    cfg.write_effective(out, "screen")
    print(f"{len(passing)} metrics pass accuracy > {threshold}")
    for m, a in passing:
        print(f"  {m}: {a:.3f}")
    return EXIT_OK


def cmd_train(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    seed = cfg.seed()
    layout = cfg.get("layout", LAYOUT_STAT4)
    model_name = cfg.get("model", "rf")
    metrics = corpus.metrics
    norm = fit_normalizer(corpus, metrics)
    features = _build_features(corpus, metrics, norm, layout)
    trainer, params = _trainer_factory(model_name, cfg, seed)
    model = trainer(features, corpus.labels())
    save_model(model, os.path.join(out, "model.json"), metrics=metrics,
               layout=layout, normalizer=norm)
    cfg.write_effective(out, "train")
    print(f"trained {model_name} ({params}) on {len(corpus)} items -> {out}/model.json")
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    model, context = load_model(cfg.args.model_file)
    metrics = context["metrics"] or corpus.metrics
    layout = context["layout"] or LAYOUT_STAT4
    norm = context["normalizer"] or fit_normalizer(corpus, metrics)
    features = _build_features(corpus, metrics, norm, layout)
    width = getattr(model, "n_features", None)
    if width is not None:
        features.values = _fit_width(features.values, width)
    report = evaluate(model, features, corpus.labels())
    _report_outputs(report, out)
    cfg.write_effective(out, "eval")
    print(f"accuracy {report.accuracy:.4f}  macro-F1 {report.macro_f1:.4f}")
    return EXIT_OK


def cmd_cv(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    seed = cfg.seed()
    k = int(cfg.get("k", 5))
    layout = cfg.get("layout", LAYOUT_STAT4)
    metrics = corpus.metrics
    norm = fit_normalizer(corpus, metrics)
    features = _build_features(corpus, metrics, norm, layout)
    trainer, _ = _trainer_factory(cfg.get("model", "rf"), cfg, seed)
    report = kfold_cv(features, corpus.labels(), trainer, k=k, seed=seed)
    _report_outputs(report, out)
    cfg.write_effective(out, "cv")
    print(f"{k}-fold accuracy {report.fold_accuracy_mean:.4f} "
          f"+/- {report.fold_accuracy_std:.4f}")
    return EXIT_OK


def cmd_lopo(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    layout = cfg.get("layout", LAYOUT_STAT4)
    metrics = corpus.metrics
    norm = fit_normalizer(corpus, metrics)
    features = _build_features(corpus, metrics, norm, layout)
    trainer, _ = _trainer_factory(cfg.get("model", "rf"), cfg, cfg.seed())
    report = lopo_cv(features, corpus.labels(), corpus.groups(), trainer)
    _report_outputs(report, out)
    cfg.write_effective(out, "lopo")
    print(f"LOPO over {len(report.folds)} groups: accuracy "
          f"{report.fold_accuracy_mean:.4f} +/- {report.fold_accuracy_std:.4f}")
    return EXIT_OK


def cmd_grid(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    seed = cfg.seed()
    model_name = cfg.get("model", "rf")
    with open(cfg.args.grid, "r", encoding="utf-8") as fh:
        grid = json.load(fh)
    if not isinstance(grid, list):
        raise DataError(f"{cfg.args.grid}: grid must be a JSON array of objects")
    layout = cfg.get("layout", LAYOUT_STAT4)
    metrics = corpus.metrics
    norm = fit_normalizer(corpus, metrics)
    features = _build_features(corpus, metrics, norm, layout)

    def family(params):
        if model_name == "rf":
            return lambda X, y: train_rf(X, y, seed=seed, **params)
        if model_name == "svm":
            return lambda X, y: train_linear_svm(X, y, seed=seed, **params)
        if model_name == "knn":
            return lambda X, y: train_knn(X, y, **params)
        if model_name == "mlp":
            return lambda X, y: train_mlp(X, y, seed=seed, **params)
        raise DataError(f"unknown model {model_name!r}")

    best_params, report = grid_search(features, corpus.labels(), family, grid,
                                      k=int(cfg.get("k", 5)), seed=seed)
    _write_json(os.path.join(out, "best_params.json"), best_params)
    _report_outputs(report, out)
    cfg.write_effective(out, "grid")
    print(f"best params {best_params}: accuracy "
          f"{report.fold_accuracy_mean:.4f} +/- {report.fold_accuracy_std:.4f}")
    return EXIT_OK


def cmd_count(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    trace = read_wide_csv(cfg.args.trace)
    catalog = cfg.catalog()
    window = int(cfg.get("window", 3))
    gap = int(cfg.get("gap", 3))
    min_jump = cfg.get("min_jump", None)
    jumps = float(min_jump) if min_jump is not None else default_min_jumps(cfg.profile())
    from .stepcount import count_participants

    count, per_metric = count_participants(trace, catalog, jumps, window, gap)
    events = {}
    for m in trace.metrics:
        if m in catalog:
            threshold = jumps if isinstance(jumps, float) else jumps[m]
            events[m] = detect_steps(trace.values(m), threshold, window, gap)
    from .stepcount import steps_to_csv

    steps_to_csv(events, os.path.join(out, "steps.csv"))
    _write_json(os.path.join(out, "count.json"),
                {"count": count, "per_metric": per_metric})
    cfg.write_effective(out, "count")
    print(f"estimated participants: {count}")
    return EXIT_OK


def cmd_correlate(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    pixels = read_wide_csv(cfg.args.pixels)
    trace = read_wide_csv(cfg.args.trace)
    metric = cfg.get("metric", "non_base_level_textures")
    x = pixels.matrix[:, 0]
    y = trace.values(metric)
    if x.size != y.size:
        raise DataError(f"pixels ({x.size}s) and trace ({y.size}s) lengths differ")
    fit = linreg(x, y)
    r = pearson(x, y)
    payload = {"metric": metric, "slope": fit.slope, "intercept": fit.intercept,
               "r_squared": fit.r_squared, "pearson": r}
    _write_json(os.path.join(out, "correlation.json"), payload)
    plots.line_plot({"pixels": (np.arange(x.size), x),
                     metric: (np.arange(y.size), y)},
                    os.path.join(out, "correlation.svg"),
                    title=f"pixel coverage vs {metric}",
                    x_label="seconds", y_label="normalized value", normalize=True)
    cfg.write_effective(out, "correlate")
    print(f"pearson {r:.4f}  r_squared {fit.r_squared:.4f}  "
          f"slope {fit.slope:.4f}  intercept {fit.intercept:.4f}")
    return EXIT_OK


def _strategy_from_cfg(cfg: RunConfig, seed: int):
    kind = cfg.get("strategy", "gaussian")
    if kind == "gaussian":
        return GaussianNoise(float(cfg.get("sigma", 1.0)), seed=seed)
    if kind == "dummy":
        return DummyRender(float(cfg.get("rate", 1.0)),
                           size_s=float(cfg.get("size", 2.0)),
                           depth_z=float(cfg.get("depth", 2.0)), seed=seed)
    raise DataError(f"unknown strategy {kind!r}")


def cmd_defend_inject(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    trace = read_wide_csv(cfg.args.trace)
    strategy = _strategy_from_cfg(cfg, cfg.seed())
    noisy = inject_noise(trace, strategy, cfg.catalog(), cfg.profile())
    write_wide_csv(noisy, os.path.join(out, "injected.csv"))
    cfg.write_effective(out, "defend-inject")
    print(f"injected {strategy} -> {out}/injected.csv")
    return EXIT_OK


def cmd_defend_detect(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    log = read_access_log(cfg.args.log)
    verdict = detect_profiler_access(
        log,
        min_events=int(cfg.get("min_events", 20)),
        cv_threshold=float(cfg.get("cv_threshold", 0.1)),
        expected_period_s=float(cfg.get("expected_period", 1.0)),
        period_tolerance=float(cfg.get("period_tolerance", 0.25)))
    _write_json(os.path.join(out, "verdict.json"), verdict.to_dict())
    cfg.write_effective(out, "defend-detect")
    print(f"flagged={verdict.flagged} cv={verdict.cv:.4f} n={verdict.n_events}"
          + (f" period={verdict.estimated_period_s:.3f}s" if verdict.flagged else ""))
    return EXIT_OK


def cmd_defend_curve(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    corpus = read_manifest(cfg.args.manifest)
    seed = cfg.seed()
    raw_levels = cfg.get("levels", "0,2,5,10,25")
    sigmas = [float(s) for s in str(raw_levels).split(",")]
    from .seeding import derive_seed

    strategies = [GaussianNoise(s, seed=derive_seed(seed, i))
                  for i, s in enumerate(sigmas)]
    trainer, _ = _trainer_factory(cfg.get("model", "rf"), cfg, seed)
    curve, clean = evaluate_countermeasure(
        corpus, trainer, strategies, seed=seed, catalog=cfg.catalog(),
        profile=cfg.profile())
    curve.to_csv(os.path.join(out, "degradation.csv"))
    clean.to_json(os.path.join(out, "clean_report.json"))
    levels = np.array([p.level for p in curve.points])
    plots.line_plot(
        {"accuracy": (levels, np.array([p.accuracy for p in curve.points])),
         "macro_f1": (levels, np.array([p.macro_f1 for p in curve.points]))},
        os.path.join(out, "degradation.svg"),
        title="attack accuracy vs injected noise",
        x_label="noise level (sigma multiplier)", y_label="score")
    cfg.write_effective(out, "defend-curve")
    for p in curve.points:
        print(f"  level {p.level}: accuracy {p.accuracy:.4f} macro_f1 {p.macro_f1:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(sub, out_required: bool = True):
    sub.add_argument("--out", required=out_required, help="output directory")
    sub.add_argument("--config", help="JSON file of default parameter values")
    sub.add_argument("--catalog", help="metric catalog JSON (default: built-in)")
    sub.add_argument("--profile", help="metric response profile JSON (default: built-in)")
    sub.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")


def _add_model_flags(sub):
    sub.add_argument("--model", choices=["rf", "svm", "knn", "mlp"],
                     help="classifier family (default rf)")
    sub.add_argument("--layout", choices=["stat4", "stat2", "sequence"],
                     help="feature layout (default stat4)")
    sub.add_argument("--trees", type=int, help="rf: number of trees (default 100)")
    sub.add_argument("--max-depth", dest="max_depth", type=int, help="rf: depth cap")
    sub.add_argument("--neighbors", type=int, help="knn: k (default 5)")
    sub.add_argument("--lr", type=float, help="svm/mlp: learning rate")
    sub.add_argument("--epochs", type=int, help="svm/mlp: training epochs")
    sub.add_argument("--reg-lambda", dest="reg_lambda", type=float,
                     help="svm: L2 regularization")
    sub.add_argument("--hidden", type=int, help="mlp: hidden layer width")
    sub.add_argument("--batch", type=int, help="mlp: batch size")


def build_parser() -> _Parser:
    parser = _Parser(prog="counterscope",
                     description="GPU-counter side-channel pipeline at desk scale")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("simulate", help="render a scene script into trace + pixel CSVs")
    p.add_argument("scene", help="scene script JSON")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = commands.add_parser("gen-corpus", help="generate a labeled corpus from a corpus spec")
    p.add_argument("corpus_spec", help="corpus spec JSON")
    _add_common(p)
    p.set_defaults(func=cmd_gen_corpus)

    p = commands.add_parser("prune", help="pairwise-correlation metric pruning")
    p.add_argument("--manifest", required=True)
    p.add_argument("--threshold", type=float, help="|r| redundancy threshold (default 0.90)")
    _add_common(p)
    p.set_defaults(func=cmd_prune)

    p = commands.add_parser("screen", help="per-metric accuracy screening")
    p.add_argument("--manifest", required=True)
    p.add_argument("--threshold-acc", dest="threshold_acc", type=float,
                   help="accuracy floor (default 0.60)")
    p.add_argument("--trees", type=int, help="screening rf: number of trees")
    _add_common(p)
    p.set_defaults(func=cmd_screen)

    p = commands.add_parser("train", help="train a classifier on a manifest corpus")
    p.add_argument("--manifest", required=True)
    _add_model_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = commands.add_parser("eval", help="evaluate a saved model on a manifest corpus")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model-file", dest="model_file", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = commands.add_parser("cv", help="stratified k-fold cross-validation")
    p.add_argument("--manifest", required=True)
    p.add_argument("--k", type=int, help="folds (default 5)")
    _add_model_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_cv)

    p = commands.add_parser("lopo", help="leave-one-group-out cross-validation")
    p.add_argument("--manifest", required=True)
    _add_model_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_lopo)

    p = commands.add_parser("grid", help="grid search with k-fold CV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--grid", required=True, help="JSON array of parameter objects")
    p.add_argument("--k", type=int, help="folds (default 5)")
    _add_model_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_grid)

    p = commands.add_parser("count", help="participant counting via step detection")
    p.add_argument("--trace", required=True, help="wide CSV trace")
    p.add_argument("--min-jump", dest="min_jump", type=float,
                   help="global jump threshold (default: per-metric 4 sigma)")
    p.add_argument("--window", type=int, help="mean window seconds (default 3)")
    p.add_argument("--gap", type=int, help="merge gap seconds (default 3)")
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = commands.add_parser("correlate", help="pixel-vs-metric regression and correlation")
    p.add_argument("--pixels", required=True, help="pixel coverage CSV")
    p.add_argument("--trace", required=True, help="wide CSV trace")
    p.add_argument("--metric", help="metric id (default non_base_level_textures)")
    _add_common(p)
    p.set_defaults(func=cmd_correlate)

    p = commands.add_parser("defend", help="countermeasure experiments")
    defend = p.add_subparsers(dest="defend_command", required=True)

    d = defend.add_parser("inject", help="write a noise-perturbed copy of a trace")
    d.add_argument("--trace", required=True)
    d.add_argument("--strategy", choices=["gaussian", "dummy"],
                   help="perturbation kind (default gaussian)")
    d.add_argument("--sigma", type=float, help="gaussian: sigma multiplier")
    d.add_argument("--rate", type=float, help="dummy: objects per second")
    d.add_argument("--size", type=float, help="dummy: object size")
    d.add_argument("--depth", type=float, help="dummy: object depth")
    _add_common(d)
    d.set_defaults(func=cmd_defend_inject)

    d = defend.add_parser("detect", help="flag repetitive profiler access in a timestamp log")
    d.add_argument("--log", required=True, help="one timestamp (seconds) per line")
    d.add_argument("--min-events", dest="min_events", type=int)
    d.add_argument("--cv-threshold", dest="cv_threshold", type=float)
    d.add_argument("--expected-period", dest="expected_period", type=float)
    d.add_argument("--period-tolerance", dest="period_tolerance", type=float)
    _add_common(d)
    d.set_defaults(func=cmd_defend_detect)

    d = defend.add_parser("curve", help="accuracy degradation curve under injected noise")
    d.add_argument("--manifest", required=True)
    d.add_argument("--levels", help="comma-separated sigma multipliers (default 0,2,5,10,25)")
    d.add_argument("--model", choices=["rf", "svm", "knn", "mlp"])
    d.add_argument("--trees", type=int)
    _add_common(d)
    d.set_defaults(func=cmd_defend_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args)
        return args.func(cfg)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - report and map to internal-error code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
