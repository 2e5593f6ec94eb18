"""Recursive feature elimination with cross-validated accuracy bookkeeping.

Elimination is cumulative: features are ranked once on the full table, then
the lowest-ranked remaining feature is dropped one step at a time while a
fresh forest is cross-validated on whatever remains. The trace records every
(subset, accuracy) pair down to the empty subset, whose accuracy is defined
as the majority-class rate. Fold assignment is fixed across steps, and all
per-step forest seeds derive from the top-level seed, so a trace is
bit-reproducible.

Re-ranking the remaining features at every step is available behind the
``rerank`` flag but off by default.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import DataValidationError
from .forest import ForestConfig, predict_proba_matrix, rank_features, train_forest
from .metrics import FoldSplit, stratified_kfold
from .table import FeatureTable


@dataclass
class RfeStep:
    subset: tuple[str, ...]  # remaining features, ranking order
    cv_accuracy: float


@dataclass
class RfeTrace:
    steps: list[RfeStep]
    initial_ranking: tuple[str, ...]
    eliminated_order: tuple[str, ...]
    full_accuracy: float  # CV accuracy before any elimination
    k_folds: int
    seed: int


def _derived_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)).generate_state(1)[0])


def _with_seed(cfg: ForestConfig, seed: int) -> ForestConfig:
    return ForestConfig(
        n_trees=cfg.n_trees, max_depth=cfg.max_depth,
        min_samples_leaf=cfg.min_samples_leaf,
        features_per_split=cfg.features_per_split,
        bootstrap=cfg.bootstrap, seed=seed,
    )


def _cv_accuracy(t: FeatureTable, names, forest_cfg: ForestConfig,
                 split: FoldSplit, seed: int, step: int) -> float:
    """Pooled k-fold accuracy of fresh forests on the given feature subset."""
    names = list(names)
    if not names:
        majority = max(int(t.labels.sum()), t.n_samples - int(t.labels.sum()))
        return majority / t.n_samples
    sub = t.select(names)
    correct = 0
    for fold in range(split.k):
        test_idx = split.fold_indices(fold)
        train_idx = np.flatnonzero(split.fold_assignments != fold)
        fold_table = FeatureTable(
            sample_ids=[sub.sample_ids[i] for i in train_idx],
            feature_names=sub.feature_names,
            values=sub.values[train_idx],
            labels=sub.labels[train_idx],
        )
        mdl = train_forest(fold_table,
                           _with_seed(forest_cfg, _derived_seed(seed, step, fold)))
        proba = predict_proba_matrix(mdl, sub.values[test_idx])
        preds = (proba >= 0.5).astype(int)
        correct += int(np.sum(preds == sub.labels[test_idx]))
    return correct / t.n_samples


def rfe_cv(t: FeatureTable, forest_cfg: ForestConfig, k_folds: int = 5,
           seed: int = 0, rerank: bool = False) -> RfeTrace:
    if t.n_features < 1:
        raise DataValidationError("table has no features to eliminate")
    split = stratified_kfold(t.labels, k_folds, seed=_derived_seed(seed, 0))

    ranking = rank_features(train_forest(t, _with_seed(forest_cfg, forest_cfg.seed)))
    full_accuracy = _cv_accuracy(t, ranking, forest_cfg, split, seed, step=0)

    remaining = list(ranking)
    steps: list[RfeStep] = []
    eliminated: list[str] = []
    n = len(ranking)
    for step in range(1, n + 1):
        if rerank and remaining:
            current = rank_features(train_forest(
                t.select(remaining),
                _with_seed(forest_cfg, _derived_seed(seed, step, k_folds + 1))))
            f_least = current[-1]
        else:
            f_least = remaining[-1]  # lowest-ranked remaining feature
        remaining.remove(f_least)
        eliminated.append(f_least)
        accuracy = _cv_accuracy(t, remaining, forest_cfg, split, seed, step)
        steps.append(RfeStep(subset=tuple(remaining), cv_accuracy=accuracy))
    return RfeTrace(steps=steps, initial_ranking=tuple(ranking),
                    eliminated_order=tuple(eliminated), full_accuracy=full_accuracy,
                    k_folds=k_folds, seed=seed)


def select_best(tr: RfeTrace) -> tuple[tuple[str, ...], float]:
    """Maximum accuracy; ties prefer the smaller subset, then the earlier step."""
    if not tr.steps:
        raise DataValidationError("empty elimination trace")
    best = tr.steps[0]
    for step in tr.steps[1:]:
        if step.cv_accuracy > best.cv_accuracy or (
                step.cv_accuracy == best.cv_accuracy and len(step.subset) < len(best.subset)):
            best = step
    return best.subset, best.cv_accuracy


def trace_to_json(tr: RfeTrace) -> dict:
    return {
        "steps": [
            {"subset": list(s.subset), "cv_accuracy": s.cv_accuracy}
            for s in tr.steps
        ],
        "initial_ranking": list(tr.initial_ranking),
        "eliminated_order": list(tr.eliminated_order),
        "full_accuracy": tr.full_accuracy,
        "k_folds": tr.k_folds,
        "seed": tr.seed,
    }


def trace_from_json(doc: dict) -> RfeTrace:
    try:
        return RfeTrace(
            steps=[RfeStep(subset=tuple(s["subset"]), cv_accuracy=s["cv_accuracy"])
                   for s in doc["steps"]],
            initial_ranking=tuple(doc["initial_ranking"]),
            eliminated_order=tuple(doc["eliminated_order"]),
            full_accuracy=doc["full_accuracy"],
            k_folds=doc["k_folds"],
            seed=doc["seed"],
        )
    except (KeyError, TypeError) as exc:
        raise DataValidationError(f"malformed elimination trace: {exc}") from exc


def save_trace(tr: RfeTrace, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        json.dump(trace_to_json(tr), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_trace(path) -> RfeTrace:
    with open(str(path), "r", encoding="utf-8") as fh:
        return trace_from_json(json.load(fh))


def write_accuracy_curve(tr: RfeTrace, path) -> None:
    """Accuracy-versus-subset-size curve as CSV, one row per elimination step."""
    with open(str(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "subset_size", "cv_accuracy"])
        for i, step in enumerate(tr.steps, start=1):
            writer.writerow([i, len(step.subset), repr(step.cv_accuracy)])
