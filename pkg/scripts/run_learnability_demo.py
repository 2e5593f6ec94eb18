#!/usr/bin/env python3
"""Learnability diagnostics demo: a healthy run next to two pathological ones.

Trains the same small network three ways on phantom slices and prints each
diagnosis:

  1. normal training (expected: learnable)
  2. learning rate 0 (expected: unlearnable via static weights)
  3. texture_amplitude 0, i.e. labels carry no image signal at all
     (the no-visible-cue regime; typically unlearnable or inconclusive)

Usage: python scripts/run_learnability_demo.py [workdir]
"""

import sys
from pathlib import Path

import numpy as np

from radlearn.diagnostics import diagnose, report_to_json, save_report
from radlearn.nn import NetConfig, TrainConfig, train
from radlearn.volume import PhantomSpec, generate_phantom, roi_slice_index

NET = NetConfig(input_dims=(16, 16), conv_blocks=[4], hidden_dense=[16], seed=3)


def phantom_slices(amplitude, seed):
    spec = PhantomSpec(n_samples_per_class=50, dims=(16, 16, 16),
                       texture_amplitude=amplitude, noise_sigma=0.1, seed=seed)
    samples = generate_phantom(spec)
    images = np.stack([v.as_zyx()[roi_slice_index(m)] for v, m, _ in samples])
    labels = np.array([label for _, _, label in samples])
    return images, labels


def run_case(name, images, labels, lr, epochs, out_dir):
    cfg = TrainConfig(loss="bce_logit", optimizer="adam", learning_rate=lr,
                      batch_size=4, epochs=epochs, seed=11)
    _, trace = train(images, labels, NET, cfg)
    report = diagnose(trace)
    save_report(report, out_dir / f"{name}.diagnosis.json")
    doc = report_to_json(report)
    static = sum(1 for layer in doc["layers"] if layer["static_weights"])
    final_acc = trace.epochs[-1].train.accuracy
    print(f"{name:<18} verdict={doc['verdict']:<13} "
          f"static_layers={static}/{len(doc['layers'])} "
          f"flip_corr={doc['sens_spec_correlation']:+.2f} "
          f"final_acc={final_acc:.3f}")
    return doc["verdict"]


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("learnability_run")
    out.mkdir(parents=True, exist_ok=True)

    textured_images, labels = phantom_slices(amplitude=2.0, seed=5)
    run_case("healthy", textured_images, labels, lr=1e-3, epochs=40, out_dir=out)
    run_case("zero_lr", textured_images, labels, lr=0.0, epochs=40, out_dir=out)

    cueless_images, labels = phantom_slices(amplitude=0.0, seed=5)
    run_case("no_visible_cue", cueless_images, labels, lr=1e-3, epochs=40, out_dir=out)


if __name__ == "__main__":
    main()
