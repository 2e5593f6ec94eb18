"""Mini-batch training loop with freeze support, and the gradient check.

Training runs in float32 with seeded batch shuffling, so a fixed
(net seed, train seed, data) triple pins the whole trace bit-exactly. Frozen
layers still receive gradients in the trace but are never updated. The trace
snapshot per epoch uses the last batch's gradients, mirroring per-epoch
histogram plots.

gradient_check builds its own float64 copy of the network and compares the
analytic gradients against central finite differences on sampled parameters;
it exists so every gradient-flow diagnosis downstream rests on verified math.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataValidationError, NumericFailure
from ..histogram import histogram_with_range
from ..metrics import confusion, metrics
from .checkpoint import Checkpoint, apply_checkpoint
from .config import NetConfig, TrainConfig
from .losses import LOSSES
from .network import Network
from .optim import make_optimizer
from .trace import (
    EpochRecord,
    HistogramRecord,
    LayerEpochRecord,
    MetricRecord,
    TrainTrace,
)

GRADIENT_CHECK_MAX_PARAMS = 5000


def _layer_values(net: Network, name: str) -> np.ndarray:
    return np.concatenate([net.params[name][p].ravel() for p in ("W", "b")])


def _grad_values(grads, name: str) -> np.ndarray:
    return np.concatenate([grads[name][p].ravel() for p in ("W", "b")])


def _l2(arr: np.ndarray) -> float:
    return float(np.sqrt(np.sum(arr.astype(np.float64) ** 2)))


def _hist_record(values: np.ndarray, n_bins: int = 32) -> HistogramRecord:
    counts, lo, hi = histogram_with_range(values.astype(np.float64), n_bins)
    return HistogramRecord(counts=counts.tolist(), lo=lo, hi=hi)


def _metric_record(net: Network, images, labels, loss_name) -> MetricRecord:
    logits = net.forward(images)
    loss_vec, _ = LOSSES[loss_name](logits, labels.astype(np.float64))
    preds = (logits >= 0).astype(int)
    m = metrics(confusion(preds, labels))
    return MetricRecord(loss=float(loss_vec.mean()), accuracy=m["accuracy"],
                        sensitivity=m["sensitivity"], specificity=m["specificity"])


def train(images, labels, net_cfg: NetConfig, train_cfg: TrainConfig,
          init: Checkpoint | None = None, val_images=None, val_labels=None):
    """Train a network and return (network, trace).

    images: (n, h, w) array; labels: (n,) of 0/1. When no validation set is
    given the validation metric rows duplicate the training rows.
    """
    images = np.asarray(images, dtype=np.float32)
    labels = np.asarray(labels).ravel().astype(np.int64)
    if images.ndim != 3 or images.shape[0] != labels.size:
        raise DataValidationError("expected (n, h, w) images aligned with labels")
    if not ((labels == 0).any() and (labels == 1).any()):
        raise DataValidationError("training needs at least 1 sample of each class")

    net = Network(net_cfg, dtype=np.float32)
    if init is not None:
        apply_checkpoint(net, init)
    unknown = [n for n in train_cfg.freeze_layers if n not in net.layer_names]
    if unknown:
        raise DataValidationError(f"freeze_layers name unknown layers: {unknown}")
    frozen = set(train_cfg.freeze_layers)

    optimizer = make_optimizer(train_cfg.optimizer, train_cfg.learning_rate)
    rng = np.random.default_rng(train_cfg.seed)
    n = labels.size
    trace = TrainTrace(layer_names=list(net.layer_names))
    prev = {name: _layer_values(net, name) for name in net.layer_names}

    has_val = val_images is not None and val_labels is not None
    if has_val:
        val_images = np.asarray(val_images, dtype=np.float32)
        val_labels = np.asarray(val_labels).ravel().astype(np.int64)

    for epoch in range(train_cfg.epochs):
        order = rng.permutation(n)
        last_grads = None
        for b, start in enumerate(range(0, n, train_cfg.batch_size)):
            batch = order[start:start + train_cfg.batch_size]
            loss, grads, _ = net.loss_and_grads(images[batch], labels[batch],
                                                train_cfg.loss)
            if not np.isfinite(loss):
                raise NumericFailure(
                    f"non-finite loss at epoch {epoch}, batch {b}",
                    epoch=epoch, batch=b)
            for name in net.layer_names:
                if name in frozen:
                    continue
                for pname in ("W", "b"):
                    net.params[name][pname] = optimizer.update(
                        (name, pname), net.params[name][pname], grads[name][pname])
            last_grads = grads

        layer_records = {}
        for name in net.layer_names:
            weights = _layer_values(net, name)
            gradient = _grad_values(last_grads, name)
            layer_records[name] = LayerEpochRecord(
                weight_l2=_l2(weights),
                grad_l2=_l2(gradient),
                delta_l2=_l2(weights - prev[name]),
                weight_hist=_hist_record(weights),
                grad_hist=_hist_record(gradient),
            )
            prev[name] = weights
        train_metrics = _metric_record(net, images, labels, train_cfg.loss)
        if has_val:
            val_metrics = _metric_record(net, val_images, val_labels, train_cfg.loss)
        else:
            val_metrics = MetricRecord(**vars(train_metrics))
        trace.epochs.append(EpochRecord(layers=layer_records, train=train_metrics,
                                        validation=val_metrics))
    return net, trace


def gradient_check(net_cfg: NetConfig, images, labels, loss: str = "bce_logit",
                   n_probe: int = 200, h: float = 1e-4, probe_seed: int = 0) -> float:
    """Max relative error between analytic and central-difference gradients.

    Runs in float64 on a fresh network built from the config. The relative
    error is |a - n| / max(1e-8, |a| + |n|) over >= n_probe sampled
    parameters (all parameters when the network is smaller).
    """
    net = Network(net_cfg, dtype=np.float64)
    if net.n_params > GRADIENT_CHECK_MAX_PARAMS:
        raise DataValidationError(
            f"gradient check limited to {GRADIENT_CHECK_MAX_PARAMS} parameters, "
            f"network has {net.n_params}")
    images = np.asarray(images, dtype=np.float64)
    labels = np.asarray(labels).ravel()

    _, grads, _ = net.loss_and_grads(images, labels, loss)

    slots = []
    for name in net.layer_names:
        for pname in ("W", "b"):
            arr = net.params[name][pname]
            slots.extend((name, pname, i) for i in range(arr.size))
    if len(slots) > n_probe:
        rng = np.random.default_rng(probe_seed)
        chosen = rng.choice(len(slots), size=n_probe, replace=False)
        slots = [slots[i] for i in chosen]

    worst = 0.0
    for name, pname, flat_idx in slots:
        arr = net.params[name][pname]
        original = arr.flat[flat_idx]
        arr.flat[flat_idx] = original + h
        loss_plus, _, _ = net.loss_and_grads(images, labels, loss)
        arr.flat[flat_idx] = original - h
        loss_minus, _, _ = net.loss_and_grads(images, labels, loss)
        arr.flat[flat_idx] = original
        numeric = (loss_plus - loss_minus) / (2.0 * h)
        analytic = grads[name][pname].flat[flat_idx]
        rel = abs(analytic - numeric) / max(1e-8, abs(analytic) + abs(numeric))
        worst = max(worst, rel)
    return worst
