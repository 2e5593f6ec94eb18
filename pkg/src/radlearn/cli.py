"""Command-line interface: one subcommand per pipeline stage.

Every subcommand is a deterministic function of (config, input files); file
outputs are byte-stable across reruns with fixed seeds. Exit codes: 0 ok,
1 usage/config error, 2 data/validation error, 3 numeric failure.

Stages and their artifacts:

    phantom   volume/mask files + manifest.csv
    extract   features.csv
    filter    significance.json
    rfe       rfe_trace.json + rfe_curve.csv
    cluster   dendrogram.json
    train     model checkpoint + train_trace.json + train_metrics.csv
    diagnose  diagnosis.json
    report    report.json + report.csv (all vs top features)
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import cluster as cluster_mod
from . import diagnostics
from . import rfe as rfe_mod
from . import stats
from . import table as table_mod
from .config import PipelineConfig, default_config, load_config
from .errors import ConfigError, DataValidationError, NumericFailure
from .features import extract_all
from .forest import ForestConfig, predict_proba_matrix, train_forest
from .metrics import auroc, confusion, metrics, stratified_kfold
from .nn import (
    NetConfig,
    TrainConfig,
    checkpoint_from_network,
    save_checkpoint,
    train,
)
from .nn import trace as nn_trace
from .volume import (
    PhantomSpec,
    generate_phantom,
    load_mask,
    load_volume,
    roi_slice_index,
    save_mask,
    save_volume,
)

REPORT_ROWS = ["Accuracy", "F1-Score", "AUROC", "Precision", "Recall"]


def _write_json(obj, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _require_inputs(paths, count, usage):
    if paths is None or len(paths) < count:
        raise ConfigError(f"this subcommand needs {usage} via --in")


# --- subcommands -----------------------------------------------------------


def cmd_phantom(cfg: PipelineConfig, in_paths, out_dir) -> None:
    spec = PhantomSpec(
        n_samples_per_class=cfg.phantom.n_samples_per_class,
        dims=cfg.phantom.dims,
        texture_amplitude=cfg.phantom.texture_amplitude,
        noise_sigma=cfg.phantom.noise_sigma,
        seed=cfg.seeds.phantom,
        modality_tag=cfg.phantom.modality,
    )
    samples = generate_phantom(spec)
    rows = []
    per_class = {0: 0, 1: 0}
    for volume, mask, label in samples:
        sample_id = f"{spec.modality_tag}_c{label}_s{per_class[label]:03d}"
        per_class[label] += 1
        base = os.path.join(out_dir, sample_id)
        save_volume(volume, base)
        save_mask(mask, base)
        # manifest paths are relative to the manifest itself
        rows.append([sample_id, label, sample_id, spec.modality_tag])
    with open(os.path.join(out_dir, "manifest.csv"), "w", newline="",
              encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "label", "path_base", "modality"])
        writer.writerows(rows)


def _read_manifest(path):
    root = os.path.dirname(os.path.abspath(str(path)))
    entries = []
    with open(str(path), "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["sample_id", "label", "path_base", "modality"]:
            raise DataValidationError(f"{path}: bad manifest header {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise DataValidationError(f"{path}:{lineno}: ragged manifest row")
            if row[1] not in ("0", "1"):
                raise DataValidationError(f"{path}:{lineno}: label must be 0 or 1")
            entries.append((row[0], int(row[1]), os.path.join(root, row[2])))
    if not entries:
        raise DataValidationError(f"{path}: manifest has no samples")
    return entries


def cmd_extract(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 1, "a manifest.csv")
    entries = _read_manifest(in_paths[0])
    ids, labels, vectors = [], [], []
    for sample_id, label, base in entries:
        volume = load_volume(base)
        mask = load_mask(base, volume.dims)
        vectors.append(extract_all(
            volume, mask,
            n_bins=cfg.extraction.n_bins,
            distance=cfg.extraction.distance,
            alpha=cfg.extraction.alpha,
        ))
        ids.append(sample_id)
        labels.append(label)
    table = table_mod.from_rows(ids, labels, vectors)
    table_mod.write_feature_table(table, os.path.join(out_dir, "features.csv"))


def cmd_filter(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 1, "a features.csv")
    table = table_mod.read_feature_table(in_paths[0])
    report = stats.filter_significant(table, alpha=cfg.filter.alpha)
    _write_json(report.as_dict(), os.path.join(out_dir, "significance.json"))


def _forest_config(cfg: PipelineConfig, seed: int) -> ForestConfig:
    return ForestConfig(
        n_trees=cfg.forest.n_trees,
        max_depth=cfg.forest.max_depth,
        min_samples_leaf=cfg.forest.min_samples_leaf,
        features_per_split=cfg.forest.features_per_split,
        bootstrap=cfg.forest.bootstrap,
        seed=seed,
    )


def cmd_rfe(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 1, "a features.csv (optionally + significance.json)")
    table = table_mod.read_feature_table(in_paths[0])
    if len(in_paths) > 1:
        with open(in_paths[1], "r", encoding="utf-8") as fh:
            sig = json.load(fh)
        keep = [f["name"] for f in sig.get("features", []) if f.get("significant")]
        if not keep:
            raise DataValidationError("significance report marks no feature significant")
        table = table.select(keep)
    trace = rfe_mod.rfe_cv(table, _forest_config(cfg, cfg.seeds.forest),
                           k_folds=cfg.rfe.k_folds, seed=cfg.seeds.rfe,
                           rerank=cfg.rfe.rerank)
    rfe_mod.save_trace(trace, os.path.join(out_dir, "rfe_trace.json"))
    rfe_mod.write_accuracy_curve(trace, os.path.join(out_dir, "rfe_curve.csv"))


def cmd_cluster(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 1, "a features.csv (optionally + rfe_trace.json)")
    table = table_mod.read_feature_table(in_paths[0])
    if len(in_paths) > 1:
        trace = rfe_mod.load_trace(in_paths[1])
        names, _ = rfe_mod.select_best(trace)
        names = list(names)
        if len(names) < 2:
            raise DataValidationError(
                f"best subset has {len(names)} feature(s); clustering needs >= 2")
    else:
        names = list(table.feature_names)
    distances = cluster_mod.correlation_distance_matrix(table, names)
    dendrogram = cluster_mod.agglomerate(distances, names)
    cluster_mod.save_dendrogram(dendrogram, os.path.join(out_dir, "dendrogram.json"))
    clusters = cluster_mod.cut(dendrogram, min(cfg.cluster.k, len(names)))
    _write_json({"k": min(cfg.cluster.k, len(names)), "clusters": clusters},
                os.path.join(out_dir, "clusters.json"))


def _slices_from_manifest(entries):
    images, labels = [], []
    for _, label, base in entries:
        volume = load_volume(base)
        mask = load_mask(base, volume.dims)
        images.append(volume.as_zyx()[roi_slice_index(mask)])
        labels.append(label)
    return np.stack(images), np.array(labels)


def cmd_train(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 1, "a manifest.csv")
    entries = _read_manifest(in_paths[0])
    images, labels = _slices_from_manifest(entries)
    net_cfg = NetConfig(
        input_dims=cfg.train.input_dims,
        conv_blocks=cfg.train.conv_blocks,
        hidden_dense=cfg.train.hidden_dense,
        seed=cfg.seeds.net,
    )
    train_cfg = TrainConfig(
        loss=cfg.train.loss,
        optimizer=cfg.train.optimizer,
        learning_rate=cfg.train.learning_rate,
        batch_size=cfg.train.batch_size,
        epochs=cfg.train.epochs,
        freeze_layers=cfg.train.freeze_layers,
        seed=cfg.seeds.train,
    )
    network, trace = train(images, labels, net_cfg, train_cfg)
    save_checkpoint(checkpoint_from_network(network), os.path.join(out_dir, "model"))
    nn_trace.save_trace(trace, os.path.join(out_dir, "train_trace.json"))
    with open(os.path.join(out_dir, "train_metrics.csv"), "w", newline="",
              encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch",
                         "train_loss", "train_accuracy", "train_sensitivity",
                         "train_specificity",
                         "val_loss", "val_accuracy", "val_sensitivity",
                         "val_specificity"])
        for i, epoch in enumerate(trace.epochs):
            writer.writerow(
                [i]
                + [repr(getattr(epoch.train, a)) for a in
                   ("loss", "accuracy", "sensitivity", "specificity")]
                + [repr(getattr(epoch.validation, a)) for a in
                   ("loss", "accuracy", "sensitivity", "specificity")])


def cmd_diagnose(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 1, "a train_trace.json")
    trace = nn_trace.load_trace(in_paths[0])
    thresholds = diagnostics.DiagnosticThresholds(
        static_rel_tol=cfg.diagnose.static_rel_tol,
        dead_abs_tol=cfg.diagnose.dead_abs_tol,
        dead_epoch_quorum=cfg.diagnose.dead_epoch_quorum,
        flip_corr_thresh=cfg.diagnose.flip_corr_thresh,
        flip_amp_thresh=cfg.diagnose.flip_amp_thresh,
        static_layer_quorum=cfg.diagnose.static_layer_quorum,
    )
    report = diagnostics.diagnose(trace, thresholds)
    diagnostics.save_report(report, os.path.join(out_dir, "diagnosis.json"))
    # plot-ready per-epoch weight/gradient histogram series
    with open(os.path.join(out_dir, "gradient_flow.csv"), "w", newline="",
              encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "layer", "kind", "bin", "count", "lo", "hi"])
        for e, epoch in enumerate(trace.epochs):
            for layer in trace.layer_names:
                rec = epoch.layers[layer]
                for kind, hist in (("weight", rec.weight_hist),
                                   ("gradient", rec.grad_hist)):
                    for b, count in enumerate(hist.counts):
                        writer.writerow([e, layer, kind, b, count,
                                         repr(hist.lo), repr(hist.hi)])


def _cv_scores(table, names, cfg: PipelineConfig, seed_tag: int):
    """Pooled out-of-fold probabilities/predictions for one feature subset."""
    labels = table.labels
    split = stratified_kfold(labels, cfg.rfe.k_folds, seed=cfg.seeds.kfold)
    probas = np.full(table.n_samples, 0.5)
    if names:
        sub = table.select(list(names))
        for fold in range(split.k):
            train_idx = np.flatnonzero(split.fold_assignments != fold)
            test_idx = split.fold_indices(fold)
            fold_table = table_mod.FeatureTable(
                sample_ids=[sub.sample_ids[i] for i in train_idx],
                feature_names=sub.feature_names,
                values=sub.values[train_idx],
                labels=labels[train_idx],
            )
            seed = int(np.random.SeedSequence(
                entropy=cfg.seeds.forest, spawn_key=(seed_tag, fold)).generate_state(1)[0])
            model = train_forest(fold_table, _forest_config(cfg, seed))
            probas[test_idx] = predict_proba_matrix(model, sub.values[test_idx])
        preds = (probas >= 0.5).astype(int)
    else:
        majority = int(labels.sum() * 2 >= labels.size)
        preds = np.full(table.n_samples, majority, dtype=int)
    return probas, preds


def _metric_rows(table, probas, preds) -> dict[str, float]:
    m = metrics(confusion(preds, table.labels))
    return {
        "Accuracy": m["accuracy"],
        "F1-Score": m["f1"],
        "AUROC": auroc(probas, table.labels),
        "Precision": m["precision"],
        "Recall": m["recall"],
    }


def cmd_report(cfg: PipelineConfig, in_paths, out_dir) -> None:
    _require_inputs(in_paths, 2, "features.csv and rfe_trace.json")
    table = table_mod.read_feature_table(in_paths[0])
    trace = rfe_mod.load_trace(in_paths[1])
    top_names, top_cv_accuracy = rfe_mod.select_best(trace)
    all_names = [n for n in table.feature_names if n in set(trace.initial_ranking)]
    if not all_names:
        raise DataValidationError("trace features not present in the table")

    all_scores = _metric_rows(table, *_cv_scores(table, all_names, cfg, seed_tag=0))
    top_scores = _metric_rows(table, *_cv_scores(table, list(top_names), cfg, seed_tag=1))

    doc = {
        "rows": REPORT_ROWS,
        "all_features": {"names": all_names, "metrics": all_scores},
        "top_features": {"names": list(top_names), "metrics": top_scores,
                         "rfe_cv_accuracy": top_cv_accuracy},
    }
    _write_json(doc, os.path.join(out_dir, "report.json"))
    with open(os.path.join(out_dir, "report.csv"), "w", newline="",
              encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "all_features", "top_features"])
        for row in REPORT_ROWS:
            writer.writerow([row, repr(all_scores[row]), repr(top_scores[row])])


_COMMANDS = {
    "phantom": cmd_phantom,
    "extract": cmd_extract,
    "filter": cmd_filter,
    "rfe": cmd_rfe,
    "cluster": cmd_cluster,
    "train": cmd_train,
    "diagnose": cmd_diagnose,
    "report": cmd_report,
}


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse default is 2, reserved here for data errors)
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radlearn",
                     description="radiomics + learnability pipeline stages")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="pipeline config JSON")
        p.add_argument("--in", dest="in_paths", nargs="+", default=None,
                       help="input artifact(s) from previous stages")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override every seed in the config")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config) if args.config else default_config()
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be a nonnegative integer")
            cfg.override_seeds(args.seed)
        os.makedirs(args.out, exist_ok=True)
        _COMMANDS[args.command](cfg, args.in_paths, args.out)
        return 0
    except ConfigError as exc:
        print(f"radlearn: config error: {exc}", file=sys.stderr)
        return 1
    except NumericFailure as exc:
        print(f"radlearn: numeric failure: {exc}", file=sys.stderr)
        return 3
    except (DataValidationError, OSError) as exc:
        print(f"radlearn: data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
