"""Random forest classifier built on CART trees with Gini splits.

Each tree grows on a bootstrap sample (with replacement, size n) and
considers feature_subsample random candidate features per split. Splits
minimize weighted child Gini impurity; ties break to the lowest feature
index, then the lowest threshold, so training is fully deterministic given
the seed. Per-tree RNG streams derive from (seed, tree index), which makes
parallel tree construction produce the same forest as serial.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateInputError
from ..seeding import derive_seed

DEFAULT_N_TREES = 100


@dataclass
class TreeNode:
    # Internal nodes carry (feature, threshold, left, right); leaves carry dist.
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    dist: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return self.dist is not None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"dist": [float(p) for p in self.dist]}
        return {
            "feature": int(self.feature),
            "threshold": float(self.threshold),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TreeNode":
        if "dist" in obj:
            return cls(dist=np.asarray(obj["dist"], dtype=float))
        return cls(feature=int(obj["feature"]), threshold=float(obj["threshold"]),
                   left=cls.from_dict(obj["left"]), right=cls.from_dict(obj["right"]))


def _best_split(X, onehot, candidates):
    """Lowest-weighted-Gini split among candidate features.

    Returns (feature, threshold) or None when no candidate separates the
    rows. First strict improvement wins, so scanning candidates in ascending
    index order and thresholds in ascending value order implements the
    lowest-index / lowest-threshold tie rule.
    """
    n = X.shape[0]
    best_cost = np.inf
    best = None
    for f in candidates:
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        boundaries = np.nonzero(vs[:-1] < vs[1:])[0]
        if boundaries.size == 0:
            continue
        cum = np.cumsum(onehot[order], axis=0)
        total = cum[-1]
        left_n = boundaries + 1.0
        right_n = n - left_n
        left_counts = cum[boundaries]
        right_counts = total - left_counts
        cost = (left_n - (left_counts ** 2).sum(axis=1) / left_n) \
            + (right_n - (right_counts ** 2).sum(axis=1) / right_n)
        k = int(np.argmin(cost))  # first occurrence -> lowest threshold
        if cost[k] < best_cost:
            best_cost = cost[k]
            b = boundaries[k]
            best = (int(f), float((vs[b] + vs[b + 1]) / 2.0))
    return best


def _grow(X, y_idx, onehot, n_classes, rng, max_depth, min_samples_split,
          feature_subsample, depth):
    counts = np.bincount(y_idx, minlength=n_classes).astype(float)
    node_dist = counts / counts.sum()
    n = y_idx.size
    if (n < min_samples_split
            or np.count_nonzero(counts) == 1
            or (max_depth is not None and depth >= max_depth)):
        return TreeNode(dist=node_dist)
    candidates = np.sort(rng.permutation(X.shape[1])[:feature_subsample])
    split = _best_split(X, onehot, candidates)
    if split is None:
        return TreeNode(dist=node_dist)
    f, threshold = split
    mask = X[:, f] <= threshold
    left = _grow(X[mask], y_idx[mask], onehot[mask], n_classes, rng,
                 max_depth, min_samples_split, feature_subsample, depth + 1)
    right = _grow(X[~mask], y_idx[~mask], onehot[~mask], n_classes, rng,
                  max_depth, min_samples_split, feature_subsample, depth + 1)
    return TreeNode(feature=f, threshold=threshold, left=left, right=right)


def _tree_dist(root, X, n_classes):
    """Leaf distribution for every row, routed with masked index batches."""
    out = np.empty((X.shape[0], n_classes))
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.dist
        else:
            mask = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
    return out


@dataclass
class RandomForestModel:
    classes: list[str]
    n_trees: int
    max_depth: int | None
    min_samples_split: int
    feature_subsample: int
    seed: int
    n_features: int
    trees: list[TreeNode] = field(default_factory=list)

    def predict_proba(self, features) -> np.ndarray:
        X = _as_matrix(features, self.n_features)
        acc = np.zeros((X.shape[0], len(self.classes)))
        for tree in self.trees:
            acc += _tree_dist(tree, X, len(self.classes))
        return acc / len(self.trees)

    def predict(self, features) -> list[str]:
        proba = self.predict_proba(features)
        # argmax takes the first maximum: ties resolve to the lowest class index
        return [self.classes[i] for i in np.argmax(proba, axis=1)]

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "feature_subsample": self.feature_subsample,
            "seed": self.seed,
            "n_features": self.n_features,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RandomForestModel":
        return cls(
            classes=list(obj["classes"]),
            n_trees=int(obj["n_trees"]),
            max_depth=obj["max_depth"],
            min_samples_split=int(obj["min_samples_split"]),
            feature_subsample=int(obj["feature_subsample"]),
            seed=int(obj["seed"]),
            n_features=int(obj["n_features"]),
            trees=[TreeNode.from_dict(t) for t in obj["trees"]],
        )


def _as_matrix(features, expect_width=None) -> np.ndarray:
    X = np.asarray(getattr(features, "values", features), dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if expect_width is not None and X.shape[1] != expect_width:
        raise DegenerateInputError(
            f"feature width {X.shape[1]} != model width {expect_width}")
    return X


def encode_labels(labels):
    """Sorted class list plus integer codes; needs >= 2 distinct classes."""
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DegenerateInputError("need >= 2 classes")
    index = {c: i for i, c in enumerate(classes)}
    return classes, np.array([index[l] for l in labels], dtype=int)


def train_rf(features, labels, n_trees: int = DEFAULT_N_TREES,
             max_depth: int | None = None, min_samples_split: int = 2,
             feature_subsample: int | None = None, seed: int = 0,
             n_workers: int = 1) -> RandomForestModel:
    """Grow a seeded forest; parallel (n_workers > 1) equals serial output."""
    X = _as_matrix(features)
    labels = list(labels)
    if X.shape[0] != len(labels):
        raise DegenerateInputError("features rows != labels length")
    if X.shape[0] == 0:
        raise DegenerateInputError("empty training set")
    if n_trees < 1:
        raise DegenerateInputError("n_trees must be >= 1")
    classes, y_idx = encode_labels(labels)
    n, d = X.shape
    m = feature_subsample if feature_subsample is not None else int(np.ceil(np.sqrt(d)))
    m = max(1, min(m, d))
    onehot_full = np.eye(len(classes))[y_idx]

    def build(tree_index: int) -> TreeNode:
        rng = np.random.default_rng(derive_seed(seed, tree_index))
        boot = rng.integers(0, n, n)
        return _grow(X[boot], y_idx[boot], onehot_full[boot], len(classes), rng,
                     max_depth, min_samples_split, m, 0)

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            trees = list(pool.map(build, range(n_trees)))
    else:
        trees = [build(i) for i in range(n_trees)]
    return RandomForestModel(classes, n_trees, max_depth, min_samples_split,
                             m, seed, d, trees)
