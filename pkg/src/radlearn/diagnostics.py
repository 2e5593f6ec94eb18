"""Learnability diagnostics over a training trace.

Three detectors formalize the "unlearnable model" signatures: layers whose
weights never move (static weights), layers whose gradients are numerically
zero almost every epoch (dead gradients), and complementary sensitivity/
specificity oscillation (class flipping, the model alternately favoring one
class). The verdict rule is fixed:

    unlearnable  <=>  (>= 50% of layers static) or class flipping
    learnable    <=>  no static layer and no flipping
    inconclusive otherwise

Every threshold is a knob on DiagnosticThresholds; the defaults are the
documented reference values. These are one formalization of qualitatively
described phenomena and are labeled as such in the report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataValidationError
from .histogram import histogram
from .nn.trace import TrainTrace

__all__ = [
    "DiagnosticThresholds",
    "LayerDiagnosis",
    "DiagnosisReport",
    "histogram",
    "detect_static_layers",
    "detect_dead_gradients",
    "detect_class_flipping",
    "diagnose",
    "report_to_json",
    "save_report",
]


@dataclass
class DiagnosticThresholds:
    static_rel_tol: float = 1e-4
    dead_abs_tol: float = 1e-10
    dead_epoch_quorum: float = 0.9
    flip_corr_thresh: float = -0.5
    flip_amp_thresh: float = 0.3
    static_layer_quorum: float = 0.5


@dataclass
class LayerDiagnosis:
    layer: str
    static_weights: bool
    dead_gradient: bool
    mean_delta_l2: float
    mean_grad_l2: float


@dataclass
class DiagnosisReport:
    layers: list[LayerDiagnosis]
    class_flipping: bool
    sens_spec_correlation: float
    verdict: str  # learnable | unlearnable | inconclusive
    thresholds: DiagnosticThresholds = field(default_factory=DiagnosticThresholds)


def pearson(a, b) -> float:
    """Pearson correlation; defined as 0 when either series is constant."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size != b.size:
        raise DataValidationError("series must have equal length")
    va = a - a.mean()
    vb = b - b.mean()
    norm = math.sqrt(float(np.sum(va ** 2)) * float(np.sum(vb ** 2)))
    if norm == 0:
        return 0.0
    return float(np.sum(va * vb) / norm)


def detect_static_layers(tr: TrainTrace, rel_tol: float = 1e-4) -> dict[str, bool]:
    """Layer is static when every epoch's weight delta is negligible
    relative to the weight norm."""
    if tr.n_epochs < 2:
        raise DataValidationError("static-layer detection needs at least 2 epochs")
    flags = {}
    for name in tr.layer_names:
        deltas = tr.series(name, "delta_l2")
        norms = tr.series(name, "weight_l2")
        flags[name] = bool(np.all(deltas <= rel_tol * (norms + 1e-12)))
    return flags


def detect_dead_gradients(tr: TrainTrace, abs_tol: float = 1e-10,
                          epoch_quorum: float = 0.9) -> dict[str, bool]:
    """Layer is dead when its gradient L2 is ~0 for >= 90% of epochs."""
    if tr.n_epochs < 1:
        raise DataValidationError("dead-gradient detection needs at least 1 epoch")
    flags = {}
    for name in tr.layer_names:
        grads = tr.series(name, "grad_l2")
        flags[name] = bool(np.mean(grads <= abs_tol) >= epoch_quorum)
    return flags


def detect_class_flipping(sens, spec, corr_thresh: float = -0.5,
                          amp_thresh: float = 0.3) -> tuple[bool, float]:
    """Flag strongly anti-correlated, high-amplitude sens/spec series.

    A stuck predictor (both series constant) is NOT flipping; its
    correlation is defined as 0 and the static-layer detector owns that case.
    """
    sens = np.asarray(sens, dtype=np.float64).ravel()
    spec = np.asarray(spec, dtype=np.float64).ravel()
    if sens.size != spec.size:
        raise DataValidationError("sensitivity and specificity series must align")
    if sens.size < 4:
        raise DataValidationError("flip detection needs series of length >= 4")
    corr = pearson(sens, spec)
    amp_ok = bool((sens.max() - sens.min() > amp_thresh)
                  and (spec.max() - spec.min() > amp_thresh))
    return bool(corr < corr_thresh) and amp_ok, corr


def diagnose(tr: TrainTrace, thresholds: DiagnosticThresholds | None = None,
             which: str = "validation") -> DiagnosisReport:
    """Combine the three detectors into a verdict over one trace.

    which selects the metric series for flip detection ("validation" by
    default; identical to "train" when training ran without a held-out set).
    """
    th = thresholds or DiagnosticThresholds()
    static = detect_static_layers(tr, th.static_rel_tol)
    dead = detect_dead_gradients(tr, th.dead_abs_tol, th.dead_epoch_quorum)
    layers = [
        LayerDiagnosis(
            layer=name,
            static_weights=static[name],
            dead_gradient=dead[name],
            mean_delta_l2=float(tr.series(name, "delta_l2").mean()),
            mean_grad_l2=float(tr.series(name, "grad_l2").mean()),
        )
        for name in tr.layer_names
    ]
    sens = tr.metric_series("sensitivity", which)
    spec = tr.metric_series("specificity", which)
    if sens.size >= 4:
        flipping, corr = detect_class_flipping(sens, spec, th.flip_corr_thresh,
                                               th.flip_amp_thresh)
    else:
        flipping, corr = False, 0.0

    static_share = sum(static.values()) / len(static)
    if static_share >= th.static_layer_quorum or flipping:
        verdict = "unlearnable"
    elif static_share == 0 and not flipping:
        verdict = "learnable"
    else:
        verdict = "inconclusive"
    return DiagnosisReport(layers=layers, class_flipping=flipping,
                           sens_spec_correlation=corr, verdict=verdict,
                           thresholds=th)


def report_to_json(report: DiagnosisReport) -> dict:
    return {
        "verdict": report.verdict,
        "class_flipping": report.class_flipping,
        "sens_spec_correlation": report.sens_spec_correlation,
        "layers": [
            {
                "layer": ld.layer,
                "static_weights": ld.static_weights,
                "dead_gradient": ld.dead_gradient,
                "mean_delta_l2": ld.mean_delta_l2,
                "mean_grad_l2": ld.mean_grad_l2,
            }
            for ld in report.layers
        ],
        "thresholds": vars(report.thresholds).copy(),
        "note": "detector thresholds are one formalization of qualitative "
                "training pathologies; tune via the diagnose config section",
    }


def save_report(report: DiagnosisReport, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        json.dump(report_to_json(report), fh, sort_keys=True, indent=2)
        fh.write("\n")
