#!/usr/bin/env python3
"""Trimming redundant counters with pairwise correlation pruning.

The reference corpus realizes a known redundancy structure (one latent
component per kept metric, partners mixed in at fixed correlations). At
the 0.90 threshold the pruner keeps the 11 independent metrics and drops
the 12 redundant partners, recording which kept metric each one shadowed.
The screening pass then ranks single metrics by their own accuracy.
"""

from counterscope.catalog import builtin_catalog
from counterscope.datasets import demo_app_corpus, redundancy_corpus
from counterscope.models import train_rf
from counterscope.selection import accuracy_screen, correlation_prune, enforce_cap

catalog = builtin_catalog()

rc = redundancy_corpus()
report = correlation_prune(rc.corpus, catalog.ids(), threshold=0.90)
print(f"retained {len(report.retained)} metrics:")
for m in report.retained:
    print(f"  {m}")
print("dropped:")
for d in report.dropped:
    print(f"  {d.dropped:42s} r={d.r:+.3f} with {d.kept}")

# screening on a small app corpus: rank metrics by standalone accuracy
corpus = demo_app_corpus(n_classes=5, repetitions=8, seed=3)
passing = accuracy_screen(
    corpus, lambda X, y: train_rf(X, y, n_trees=30, seed=0),
    threshold_acc=0.60, split_seed=0)
print(f"\n{len(passing)} of {len(corpus.metrics)} metrics pass the 60% screen; top 5:")
for m, acc in passing[:5]:
    print(f"  {m}: {acc:.2f}")

capped = enforce_cap([m for m, _ in passing])
print(f"profiler cap leaves {len(capped)} metrics to collect")
