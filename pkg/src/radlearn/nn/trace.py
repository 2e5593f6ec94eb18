"""Per-epoch, per-layer training trace: the input to the diagnostics.

Each epoch records, per layer: L2 norms of the weights, of the last batch's
gradient, and of the weight change since the previous epoch end, plus 32-bin
histograms of weight and gradient values. Train and validation metric rows
(loss, accuracy, sensitivity, specificity) complete the record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataValidationError


@dataclass
class HistogramRecord:
    counts: list[int]
    lo: float
    hi: float


@dataclass
class LayerEpochRecord:
    weight_l2: float
    grad_l2: float
    delta_l2: float
    weight_hist: HistogramRecord
    grad_hist: HistogramRecord


@dataclass
class MetricRecord:
    loss: float
    accuracy: float
    sensitivity: float
    specificity: float


@dataclass
class EpochRecord:
    layers: dict[str, LayerEpochRecord]
    train: MetricRecord
    validation: MetricRecord


@dataclass
class TrainTrace:
    layer_names: list[str]
    epochs: list[EpochRecord] = field(default_factory=list)

    @property
    def n_epochs(self) -> int:
        return len(self.epochs)

    def series(self, layer: str, attribute: str) -> np.ndarray:
        """Per-epoch series of one layer statistic (weight_l2/grad_l2/delta_l2)."""
        if layer not in self.layer_names:
            raise DataValidationError(f"unknown layer {layer!r}")
        return np.array([getattr(e.layers[layer], attribute) for e in self.epochs])

    def metric_series(self, attribute: str, which: str = "validation") -> np.ndarray:
        return np.array([getattr(getattr(e, which), attribute) for e in self.epochs])


def _hist_to_json(h: HistogramRecord) -> dict:
    return {"counts": list(h.counts), "lo": h.lo, "hi": h.hi}


def _hist_from_json(doc: dict) -> HistogramRecord:
    return HistogramRecord(counts=list(doc["counts"]), lo=doc["lo"], hi=doc["hi"])


def trace_to_json(tr: TrainTrace) -> dict:
    return {
        "layer_names": list(tr.layer_names),
        "epochs": [
            {
                "layers": {
                    name: {
                        "weight_l2": rec.weight_l2,
                        "grad_l2": rec.grad_l2,
                        "delta_l2": rec.delta_l2,
                        "weight_hist": _hist_to_json(rec.weight_hist),
                        "grad_hist": _hist_to_json(rec.grad_hist),
                    }
                    for name, rec in epoch.layers.items()
                },
                "train": vars(epoch.train).copy(),
                "validation": vars(epoch.validation).copy(),
            }
            for epoch in tr.epochs
        ],
    }


def trace_from_json(doc: dict) -> TrainTrace:
    try:
        epochs = []
        for ed in doc["epochs"]:
            layers = {
                name: LayerEpochRecord(
                    weight_l2=rec["weight_l2"],
                    grad_l2=rec["grad_l2"],
                    delta_l2=rec["delta_l2"],
                    weight_hist=_hist_from_json(rec["weight_hist"]),
                    grad_hist=_hist_from_json(rec["grad_hist"]),
                )
                for name, rec in ed["layers"].items()
            }
            epochs.append(EpochRecord(
                layers=layers,
                train=MetricRecord(**ed["train"]),
                validation=MetricRecord(**ed["validation"]),
            ))
        return TrainTrace(layer_names=list(doc["layer_names"]), epochs=epochs)
    except (KeyError, TypeError) as exc:
        raise DataValidationError(f"malformed training trace: {exc}") from exc


def save_trace(tr: TrainTrace, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        json.dump(trace_to_json(tr), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_trace(path) -> TrainTrace:
    with open(str(path), "r", encoding="utf-8") as fh:
        return trace_from_json(json.load(fh))
