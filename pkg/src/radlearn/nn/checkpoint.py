"""Checkpoint save/load: JSON header + little-endian float32 blob.

``<base>.ckpt.json`` lists layers and parameter shapes in order;
``<base>.ckpt.raw`` concatenates the arrays in that order. The in-memory
training dtype is float32, so the round trip is bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DataValidationError
from .network import Network


@dataclass
class Checkpoint:
    layers: dict[str, dict[str, np.ndarray]]  # name -> {"W": arr, "b": arr}
    layer_order: list[str]


def checkpoint_from_network(net: Network) -> Checkpoint:
    return Checkpoint(
        layers={name: {k: v.astype("<f4") for k, v in net.params[name].items()}
                for name in net.layer_names},
        layer_order=list(net.layer_names),
    )


def apply_checkpoint(net: Network, ckpt: Checkpoint) -> None:
    """Load checkpoint weights into a network, validating every shape."""
    if set(ckpt.layer_order) != set(net.layer_names):
        raise DataValidationError(
            f"checkpoint layers {ckpt.layer_order} do not match network layers {net.layer_names}")
    for name in net.layer_names:
        for pname, arr in net.params[name].items():
            if pname not in ckpt.layers[name]:
                raise DataValidationError(f"checkpoint missing {name}.{pname}")
            stored = ckpt.layers[name][pname]
            if stored.shape != arr.shape:
                raise DataValidationError(
                    f"shape mismatch for {name}.{pname}: checkpoint "
                    f"{stored.shape} vs network {arr.shape}")
            net.params[name][pname] = stored.astype(net.dtype)


def save_checkpoint(ckpt: Checkpoint, path_base) -> None:
    path_base = str(path_base)
    header = {
        "dtype": "f32le",
        "layers": [
            {
                "name": name,
                "params": [
                    {"name": pname, "shape": list(ckpt.layers[name][pname].shape)}
                    for pname in ("W", "b")
                ],
            }
            for name in ckpt.layer_order
        ],
    }
    with open(path_base + ".ckpt.json", "w", encoding="utf-8") as fh:
        json.dump(header, fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(path_base + ".ckpt.raw", "wb") as fh:
        for name in ckpt.layer_order:
            for pname in ("W", "b"):
                fh.write(ckpt.layers[name][pname].astype("<f4").tobytes())


def load_checkpoint(path_base) -> Checkpoint:
    path_base = str(path_base)
    with open(path_base + ".ckpt.json", "r", encoding="utf-8") as fh:
        try:
            header = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataValidationError(f"malformed checkpoint header: {exc}") from exc
    if header.get("dtype") != "f32le":
        raise DataValidationError(f"unsupported checkpoint dtype {header.get('dtype')!r}")
    with open(path_base + ".ckpt.raw", "rb") as fh:
        blob = fh.read()
    layers: dict[str, dict[str, np.ndarray]] = {}
    order: list[str] = []
    offset = 0
    for layer in header["layers"]:
        name = layer["name"]
        order.append(name)
        layers[name] = {}
        for param in layer["params"]:
            shape = tuple(param["shape"])
            count = int(np.prod(shape)) if shape else 1
            nbytes = 4 * count
            if offset + nbytes > len(blob):
                raise DataValidationError("checkpoint blob shorter than header describes")
            arr = np.frombuffer(blob[offset:offset + nbytes], dtype="<f4").reshape(shape)
            layers[name][param["name"]] = arr.copy()
            offset += nbytes
    if offset != len(blob):
        raise DataValidationError("checkpoint blob longer than header describes")
    return Checkpoint(layers=layers, layer_order=order)
