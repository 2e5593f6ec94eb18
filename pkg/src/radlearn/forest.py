"""Random-forest classifier with Gini importances, built for determinism.

Trees are grown greedily on Gini impurity with midpoint thresholds between
consecutive distinct sorted values. Per-tree random streams derive from
(seed, tree index) via numpy SeedSequence spawning, so a fixed seed pins the
whole ensemble regardless of training order. Importance is mean impurity
decrease across trees, normalized to sum 1 when any split occurred; ranking
ties break by ascending feature name so the elimination loop has a total
order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataValidationError
from .features.vector import FeatureVector
from .table import FeatureTable

_MIN_GAIN = 1e-12


@dataclass
class ForestConfig:
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_leaf: int = 1
    features_per_split: str | int = "sqrt"
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise DataValidationError("n_trees must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise DataValidationError("max_depth must be >= 1 or None")
        if self.min_samples_leaf < 1:
            raise DataValidationError("min_samples_leaf must be >= 1")
        if isinstance(self.features_per_split, str) and self.features_per_split != "sqrt":
            raise DataValidationError("features_per_split must be 'sqrt' or a count")


@dataclass
class _Node:
    # split node when feature >= 0; leaf otherwise
    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    p1: float = 0.0  # class-1 probability at a leaf


@dataclass
class _Tree:
    nodes: list[_Node] = field(default_factory=list)

    def predict_p1(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.float64)
        for i, row in enumerate(X):
            node = self.nodes[0]
            while node.feature >= 0:
                node = self.nodes[node.left] if row[node.feature] <= node.threshold \
                    else self.nodes[node.right]
            out[i] = node.p1
        return out


@dataclass
class ForestModel:
    feature_names: list[str]
    trees: list[_Tree]
    importances: np.ndarray  # per feature, sums to 1 unless no split anywhere
    config: ForestConfig


def gini_impurity(counts) -> float:
    """1 - sum((n_c / n)^2) over class counts."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise DataValidationError("gini impurity of an empty node is undefined")
    p = counts / total
    return float(1.0 - np.sum(p ** 2))


def _best_split(X, y, candidates, min_leaf):
    """Best (feature, threshold, gain) over candidate features; None when no
    valid split strictly reduces impurity."""
    n = y.size
    n1_total = int(y.sum())
    parent = 1.0 - ((n1_total / n) ** 2 + ((n - n1_total) / n) ** 2)
    best = None
    for f in candidates:
        col = X[:, f]
        order = np.argsort(col, kind="mergesort")
        vs = col[order]
        ys = y[order]
        distinct = np.flatnonzero(vs[:-1] < vs[1:])  # split after position i
        if distinct.size == 0:
            continue
        cum1 = np.cumsum(ys)
        nl = distinct + 1
        nr = n - nl
        ok = (nl >= min_leaf) & (nr >= min_leaf)
        if not ok.any():
            continue
        nl, nr, pos = nl[ok], nr[ok], distinct[ok]
        l1 = cum1[pos]
        r1 = n1_total - l1
        gini_l = 1.0 - ((l1 / nl) ** 2 + ((nl - l1) / nl) ** 2)
        gini_r = 1.0 - ((r1 / nr) ** 2 + ((nr - r1) / nr) ** 2)
        gain = parent - (nl * gini_l + nr * gini_r) / n
        k = int(np.argmax(gain))  # first (lowest threshold) among equal gains
        if gain[k] > _MIN_GAIN and (best is None or gain[k] > best[2]):
            threshold = (vs[pos[k]] + vs[pos[k] + 1]) / 2.0
            best = (int(f), float(threshold), float(gain[k]))
    return best


def _grow_tree(X, y, cfg: ForestConfig, rng, importance_acc: np.ndarray) -> _Tree:
    n_features = X.shape[1]
    if cfg.features_per_split == "sqrt":
        m = max(1, int(np.sqrt(n_features)))
    else:
        m = min(int(cfg.features_per_split), n_features)
    n_root = y.size
    tree = _Tree()

    def build(idx: np.ndarray, depth: int) -> int:
        node_id = len(tree.nodes)
        tree.nodes.append(_Node())
        ys = y[idx]
        n = ys.size
        n1 = int(ys.sum())
        pure = n1 == 0 or n1 == n
        at_depth = cfg.max_depth is not None and depth >= cfg.max_depth
        split = None
        if not pure and not at_depth and n >= 2 * cfg.min_samples_leaf:
            candidates = np.sort(rng.choice(n_features, size=m, replace=False))
            split = _best_split(X[idx], ys, candidates, cfg.min_samples_leaf)
        if split is None:
            tree.nodes[node_id] = _Node(p1=n1 / n)
            return node_id
        f, threshold, gain = split
        importance_acc[f] += (n / n_root) * gain
        go_left = X[idx, f] <= threshold
        left = build(idx[go_left], depth + 1)
        right = build(idx[~go_left], depth + 1)
        tree.nodes[node_id] = _Node(feature=f, threshold=threshold, left=left, right=right)
        return node_id

    build(np.arange(y.size), 0)
    return tree


def train_forest(t: FeatureTable, cfg: ForestConfig) -> ForestModel:
    X = t.values
    y = t.labels
    if t.n_samples < 2:
        raise DataValidationError("forest training needs at least 2 samples")
    if not ((y == 0).any() and (y == 1).any()):
        raise DataValidationError("forest training needs both classes present")
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_trees)
    importances = np.zeros(t.n_features, dtype=np.float64)
    trees = []
    for tree_seed in seeds:
        rng = np.random.default_rng(tree_seed)
        if cfg.bootstrap:
            rows = rng.integers(0, t.n_samples, size=t.n_samples)
        else:
            rows = np.arange(t.n_samples)
        acc = np.zeros(t.n_features, dtype=np.float64)
        trees.append(_grow_tree(X[rows], y[rows], cfg, rng, acc))
        importances += acc
    importances /= cfg.n_trees
    total = importances.sum()
    if total > 0:
        importances /= total
    return ForestModel(feature_names=list(t.feature_names), trees=trees,
                       importances=importances, config=cfg)


def predict_proba_matrix(mdl: ForestModel, X: np.ndarray) -> np.ndarray:
    """Mean per-tree class-1 leaf probability for each row of X."""
    X = np.asarray(X, dtype=np.float64)
    out = np.zeros(X.shape[0], dtype=np.float64)
    for tree in mdl.trees:
        out += tree.predict_p1(X)
    return out / len(mdl.trees)


def predict_proba(mdl: ForestModel, row: FeatureVector) -> float:
    values = row.as_dict()
    missing = [n for n in mdl.feature_names if n not in values]
    if missing:
        raise DataValidationError(f"row is missing model features: {missing}")
    x = np.array([[values[n] for n in mdl.feature_names]])
    return float(predict_proba_matrix(mdl, x)[0])


def rank_features(mdl: ForestModel) -> list[str]:
    """Names sorted by importance high to low; ties by ascending name."""
    order = sorted(range(len(mdl.feature_names)),
                   key=lambda i: (-mdl.importances[i], mdl.feature_names[i]))
    return [mdl.feature_names[i] for i in order]


def forest_to_json(mdl: ForestModel) -> dict:
    return {
        "feature_names": mdl.feature_names,
        "importances": mdl.importances.tolist(),
        "config": {
            "n_trees": mdl.config.n_trees,
            "max_depth": mdl.config.max_depth,
            "min_samples_leaf": mdl.config.min_samples_leaf,
            "features_per_split": mdl.config.features_per_split,
            "bootstrap": mdl.config.bootstrap,
            "seed": mdl.config.seed,
        },
        "trees": [
            {
                "feature": [n.feature for n in tree.nodes],
                "threshold": [n.threshold for n in tree.nodes],
                "left": [n.left for n in tree.nodes],
                "right": [n.right for n in tree.nodes],
                "p1": [n.p1 for n in tree.nodes],
            }
            for tree in mdl.trees
        ],
    }


def forest_from_json(doc: dict) -> ForestModel:
    try:
        cfg = ForestConfig(**doc["config"])
        trees = []
        for td in doc["trees"]:
            nodes = [
                _Node(feature=f, threshold=t, left=l, right=r, p1=p)
                for f, t, l, r, p in zip(td["feature"], td["threshold"],
                                         td["left"], td["right"], td["p1"])
            ]
            trees.append(_Tree(nodes=nodes))
        return ForestModel(feature_names=list(doc["feature_names"]), trees=trees,
                           importances=np.asarray(doc["importances"], dtype=np.float64),
                           config=cfg)
    except (KeyError, TypeError) as exc:
        raise DataValidationError(f"malformed forest document: {exc}") from exc


def save_forest(mdl: ForestModel, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        json.dump(forest_to_json(mdl), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_forest(path) -> ForestModel:
    with open(str(path), "r", encoding="utf-8") as fh:
        return forest_from_json(json.load(fh))
