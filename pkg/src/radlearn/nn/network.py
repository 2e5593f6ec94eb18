"""Plain conv/dense network with hand-written forward and backward passes.

Architecture per NetConfig: repeated [conv3x3 (pad 1) -> relu -> maxpool2x2]
blocks, flatten, dense hidden layers with relu, and a single-logit dense
output. Weights are He-initialized from the config seed. The same code runs
in float32 (training, bit-exact checkpoints) or float64 (gradient checking).

Layer names are "conv1"..., "fc1"..., and "fc_out"; each layer holds a "W"
and a "b" array.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import DataValidationError
from .config import NetConfig
from .losses import LOSSES


def _im2col(xp: np.ndarray, k: int) -> np.ndarray:
    """(n, c, h, w) padded input -> (n, c*k*k, out_h*out_w) patch matrix."""
    n, c, h, w = xp.shape
    out_h, out_w = h - k + 1, w - k + 1
    win = sliding_window_view(xp, (k, k), axis=(2, 3))  # (n, c, out_h, out_w, k, k)
    cols = win.transpose(0, 1, 4, 5, 2, 3).reshape(n, c * k * k, out_h * out_w)
    return np.ascontiguousarray(cols)


class Network:
    def __init__(self, cfg: NetConfig, dtype=np.float32):
        self.cfg = cfg
        self.dtype = np.dtype(dtype)
        self.params: dict[str, dict[str, np.ndarray]] = {}
        self.layer_names: list[str] = []
        rng = np.random.default_rng(cfg.seed)

        h, w = cfg.input_dims
        in_c = 1
        for i, out_c in enumerate(cfg.conv_blocks, start=1):
            fan_in = in_c * 9
            wgt = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(out_c, in_c, 3, 3))
            self._add(f"conv{i}", wgt, np.zeros(out_c))
            in_c = out_c
            h, w = h // 2, w // 2
        in_features = in_c * h * w
        for i, width in enumerate(cfg.hidden_dense, start=1):
            wgt = rng.normal(0.0, np.sqrt(2.0 / in_features), size=(width, in_features))
            self._add(f"fc{i}", wgt, np.zeros(width))
            in_features = width
        wgt = rng.normal(0.0, np.sqrt(2.0 / in_features), size=(1, in_features))
        self._add("fc_out", wgt, np.zeros(1))

    def _add(self, name, w, b):
        self.layer_names.append(name)
        self.params[name] = {"W": w.astype(self.dtype), "b": b.astype(self.dtype)}

    @property
    def n_params(self) -> int:
        return sum(p.size for layer in self.params.values() for p in layer.values())

    def astype(self, dtype) -> "Network":
        clone = Network.__new__(Network)
        clone.cfg = self.cfg
        clone.dtype = np.dtype(dtype)
        clone.layer_names = list(self.layer_names)
        clone.params = {
            name: {k: v.astype(dtype) for k, v in layer.items()}
            for name, layer in self.params.items()
        }
        return clone

    # -- forward / backward -------------------------------------------------

    def _prepare_input(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=self.dtype)
        if x.ndim == 3:
            x = x[:, None, :, :]
        if x.ndim != 4 or x.shape[1] != 1 or x.shape[2:] != self.cfg.input_dims:
            raise DataValidationError(
                f"expected images of shape (n, {self.cfg.input_dims[0]}, "
                f"{self.cfg.input_dims[1]}), got {x.shape}")
        return x

    def _forward(self, x: np.ndarray):
        caches = []
        out = x
        for i in range(1, len(self.cfg.conv_blocks) + 1):
            name = f"conv{i}"
            wgt, b = self.params[name]["W"], self.params[name]["b"]
            xp = np.pad(out, ((0, 0), (0, 0), (1, 1), (1, 1)))
            cols = _im2col(xp, 3)
            n, _, hh, ww = out.shape
            out_c = wgt.shape[0]
            w2d = wgt.reshape(out_c, -1)
            conv = np.einsum("of,nfp->nop", w2d, cols) + b[None, :, None]
            conv = conv.reshape(n, out_c, hh, ww)
            relu_mask = conv > 0
            act = conv * relu_mask
            # 2x2 max pool, stride 2, odd edge cropped; first max wins ties
            h2, w2 = hh // 2 * 2, ww // 2 * 2
            windows = act[:, :, :h2, :w2].reshape(n, out_c, h2 // 2, 2, w2 // 2, 2)
            windows = windows.transpose(0, 1, 2, 4, 3, 5).reshape(
                n, out_c, h2 // 2, w2 // 2, 4)
            amax = windows.argmax(axis=-1)
            pooled = np.take_along_axis(windows, amax[..., None], axis=-1)[..., 0]
            caches.append({"name": name, "kind": "conv", "cols": cols,
                           "in_shape": out.shape, "relu_mask": relu_mask,
                           "amax": amax, "act_shape": act.shape})
            out = pooled
        flat_shape = out.shape
        out = out.reshape(out.shape[0], -1)
        caches.append({"kind": "flatten", "shape": flat_shape})
        for i in range(1, len(self.cfg.hidden_dense) + 1):
            name = f"fc{i}"
            wgt, b = self.params[name]["W"], self.params[name]["b"]
            z = out @ wgt.T + b
            relu_mask = z > 0
            caches.append({"name": name, "kind": "dense", "x": out,
                           "relu_mask": relu_mask})
            out = z * relu_mask
        wgt, b = self.params["fc_out"]["W"], self.params["fc_out"]["b"]
        caches.append({"name": "fc_out", "kind": "dense", "x": out, "relu_mask": None})
        logits = (out @ wgt.T + b)[:, 0]
        return logits, caches

    def forward(self, x) -> np.ndarray:
        """Logits for a batch of images."""
        logits, _ = self._forward(self._prepare_input(x))
        return logits

    def _backward(self, caches, dlogits: np.ndarray):
        grads: dict[str, dict[str, np.ndarray]] = {}
        d = dlogits[:, None].astype(self.dtype)
        for cache in reversed(caches):
            if cache["kind"] == "dense":
                name = cache["name"]
                if cache["relu_mask"] is not None:
                    d = d * cache["relu_mask"]  # relu follows the affine op
                x = cache["x"]
                grads[name] = {"W": d.T @ x, "b": d.sum(axis=0)}
                d = d @ self.params[name]["W"]
            elif cache["kind"] == "flatten":
                d = d.reshape(cache["shape"])
            else:  # conv block: unpool -> relu -> conv
                name = cache["name"]
                wgt = self.params[name]["W"]
                n, out_c, hh, ww = cache["act_shape"]
                h2, w2 = hh // 2 * 2, ww // 2 * 2
                amax = cache["amax"]
                dwin = np.zeros((n, out_c, h2 // 2, w2 // 2, 4), dtype=self.dtype)
                np.put_along_axis(dwin, amax[..., None], d[..., None], axis=-1)
                dact = np.zeros(cache["act_shape"], dtype=self.dtype)
                dact[:, :, :h2, :w2] = (
                    dwin.reshape(n, out_c, h2 // 2, w2 // 2, 2, 2)
                    .transpose(0, 1, 2, 4, 3, 5)
                    .reshape(n, out_c, h2, w2)
                )
                dconv = dact * cache["relu_mask"]
                dconv2d = dconv.reshape(n, out_c, -1)
                cols = cache["cols"]
                grads[name] = {
                    "W": np.einsum("nop,nfp->of", dconv2d, cols).reshape(wgt.shape),
                    "b": dconv2d.sum(axis=(0, 2)),
                }
                dcols = np.einsum("of,nop->nfp", wgt.reshape(out_c, -1), dconv2d)
                in_n, in_c, in_h, in_w = cache["in_shape"]
                dxp = np.zeros((in_n, in_c, in_h + 2, in_w + 2), dtype=self.dtype)
                dcols6 = dcols.reshape(in_n, in_c, 3, 3, in_h, in_w)
                for di in range(3):
                    for dj in range(3):
                        dxp[:, :, di:di + in_h, dj:dj + in_w] += dcols6[:, :, di, dj]
                d = dxp[:, :, 1:-1, 1:-1]
        return grads

    def loss_and_grads(self, x, y, loss_name: str):
        """(mean loss, per-layer grads, logits) on a batch."""
        x = self._prepare_input(x)
        y = np.asarray(y, dtype=self.dtype).ravel()
        if y.size != x.shape[0]:
            raise DataValidationError("images and labels must align")
        logits, caches = self._forward(x)
        loss_vec, dz = LOSSES[loss_name](logits, y)
        # mean reduction: spread the 1/n over per-sample gradients
        dlogits = dz / y.size
        grads = self._backward(caches, dlogits)
        return float(loss_vec.mean()), grads, logits
