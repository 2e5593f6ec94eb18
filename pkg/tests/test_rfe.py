import numpy as np
import pytest

from radlearn.errors import DataValidationError
from radlearn.forest import ForestConfig
from radlearn.rfe import (
    RfeStep,
    RfeTrace,
    load_trace,
    rfe_cv,
    save_trace,
    select_best,
    trace_from_json,
    trace_to_json,
    write_accuracy_curve,
)
from radlearn.table import FeatureTable


def _table(values, labels, names=None):
    values = np.asarray(values, dtype=np.float64)
    names = names or [f"f{i}" for i in range(values.shape[1])]
    return FeatureTable(sample_ids=[f"s{i}" for i in range(values.shape[0])],
                        feature_names=names, values=values, labels=np.asarray(labels))


def _three_feature_table(seed=0):
    rng = np.random.default_rng(seed)
    n = 30
    labels = np.array([0, 1] * (n // 2))
    values = np.column_stack([
        labels + rng.normal(0, 0.3, n),
        rng.normal(size=n),
        rng.normal(size=n),
    ])
    return _table(values, labels, names=["signal", "noise1", "noise2"])


FAST = ForestConfig(n_trees=10, seed=5)


def test_trace_structure_three_features():
    t = _three_feature_table()
    tr = rfe_cv(t, FAST, k_folds=3, seed=2)
    assert len(tr.steps) == 3
    assert [len(s.subset) for s in tr.steps] == [2, 1, 0]
    # empty-subset accuracy is the majority-class rate
    assert tr.steps[-1].cv_accuracy == pytest.approx(0.5)


def test_eliminated_order_is_reversed_ranking():
    t = _three_feature_table(seed=1)
    tr = rfe_cv(t, FAST, k_folds=3, seed=3)
    assert tr.eliminated_order == tuple(reversed(tr.initial_ranking))


def test_subsets_strictly_shrink():
    t = _three_feature_table(seed=2)
    tr = rfe_cv(t, FAST, k_folds=3, seed=4)
    previous = set(tr.initial_ranking)
    for step in tr.steps:
        current = set(step.subset)
        assert current < previous
        assert len(current) == len(previous) - 1
        previous = current


def test_single_feature_table():
    rng = np.random.default_rng(3)
    labels = np.array([0, 1] * 10)
    t = _table((labels + rng.normal(0, 0.4, 20))[:, None], labels, names=["only"])
    tr = rfe_cv(t, FAST, k_folds=2, seed=0)
    assert len(tr.steps) == 1
    assert tr.steps[0].subset == ()


def test_trace_is_deterministic():
    t = _three_feature_table(seed=4)
    a = rfe_cv(t, FAST, k_folds=3, seed=9)
    b = rfe_cv(t, FAST, k_folds=3, seed=9)
    assert trace_to_json(a) == trace_to_json(b)
    c = rfe_cv(t, FAST, k_folds=3, seed=10)
    assert trace_to_json(a) != trace_to_json(c)


def test_class_smaller_than_folds_rejected():
    t = _three_feature_table()
    with pytest.raises(DataValidationError):
        rfe_cv(t, FAST, k_folds=20, seed=0)


def test_select_best_max_accuracy():
    tr = RfeTrace(
        steps=[RfeStep(("a", "b"), 0.6), RfeStep(("a",), 0.7), RfeStep((), 0.5)],
        initial_ranking=("a", "b", "c"), eliminated_order=("c", "b", "a"),
        full_accuracy=0.6, k_folds=5, seed=0)
    subset, acc = select_best(tr)
    assert subset == ("a",)
    assert acc == 0.7


def test_select_best_tie_prefers_smaller_subset():
    tr = RfeTrace(
        steps=[
            RfeStep(tuple("abcdefgh"), 0.7),
            RfeStep(tuple("abcdefg"), 0.65),
            RfeStep(tuple("abc"), 0.7),
            RfeStep(tuple("ab"), 0.6),
        ],
        initial_ranking=tuple("abcdefghi"), eliminated_order=tuple("ihgfedcba"),
        full_accuracy=0.6, k_folds=5, seed=0)
    subset, _ = select_best(tr)
    assert subset == tuple("abc")


def test_select_best_empty_trace_rejected():
    tr = RfeTrace(steps=[], initial_ranking=(), eliminated_order=(),
                  full_accuracy=0.0, k_folds=5, seed=0)
    with pytest.raises(DataValidationError):
        select_best(tr)


def test_informative_features_survive_elimination():
    # 5 weakly informative + 15 noise features; best subset keeps the signal
    rng = np.random.default_rng(12)
    n = 60
    labels = np.array([0, 1] * (n // 2))
    informative = np.column_stack([labels + rng.normal(0, 1.0, n) for _ in range(5)])
    noise = rng.normal(size=(n, 15))
    names = [f"info{i}" for i in range(5)] + [f"noise{i}" for i in range(15)]
    t = _table(np.column_stack([informative, noise]), labels, names=names)
    tr = rfe_cv(t, ForestConfig(n_trees=20, seed=0), k_folds=3, seed=1)
    subset, acc = select_best(tr)
    kept_informative = sum(1 for name in subset if name.startswith("info"))
    assert kept_informative >= 4
    assert acc >= tr.full_accuracy - 0.02


def test_rerank_mode_still_covers_all_sizes():
    t = _three_feature_table(seed=6)
    tr = rfe_cv(t, FAST, k_folds=3, seed=5, rerank=True)
    assert [len(s.subset) for s in tr.steps] == [2, 1, 0]
    assert sorted(tr.eliminated_order) == sorted(tr.initial_ranking)


def test_trace_json_round_trip(tmp_path):
    t = _three_feature_table(seed=7)
    tr = rfe_cv(t, FAST, k_folds=3, seed=6)
    save_trace(tr, tmp_path / "trace.json")
    back = load_trace(tmp_path / "trace.json")
    assert trace_to_json(back) == trace_to_json(tr)


def test_accuracy_curve_rows(tmp_path):
    t = _three_feature_table(seed=8)
    tr = rfe_cv(t, FAST, k_folds=3, seed=7)
    path = tmp_path / "curve.csv"
    write_accuracy_curve(tr, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "step,subset_size,cv_accuracy"
    assert len(lines) == 1 + 3


def test_malformed_trace_rejected():
    with pytest.raises(DataValidationError):
        trace_from_json({"steps": [{"subset": ["a"]}]})
