"""Adam and RMSProp parameter updates.

The step functions are pure array transforms; the optimizer classes keep
per-parameter state for the training loop and step counts for Adam's bias
correction.
"""

from __future__ import annotations

import numpy as np


def step_adam(theta, grad, m, v, t, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    """Bias-corrected Adam step; t is the 1-based step count.

    Returns (theta', m', v') without mutating the inputs.
    """
    m = beta1 * m + (1.0 - beta1) * grad
    v = beta2 * v + (1.0 - beta2) * grad ** 2
    m_hat = m / (1.0 - beta1 ** t)
    v_hat = v / (1.0 - beta2 ** t)
    theta = theta - lr * m_hat / (np.sqrt(v_hat) + eps)
    return theta, m, v


def step_rmsprop(theta, grad, v, lr, decay=0.9, eps=1e-8):
    """v <- decay*v + (1-decay)*g^2; theta <- theta - lr*g/(sqrt(v)+eps)."""
    v = decay * v + (1.0 - decay) * grad ** 2
    theta = theta - lr * grad / (np.sqrt(v) + eps)
    return theta, v


class AdamOptimizer:
    def __init__(self, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._m = {}
        self._v = {}
        self._t = {}

    def update(self, key, theta, grad):
        m = self._m.get(key, np.zeros_like(theta))
        v = self._v.get(key, np.zeros_like(theta))
        t = self._t.get(key, 0) + 1
        theta, m, v = step_adam(theta, grad, m, v, t, self.lr, self.beta1,
                                self.beta2, self.eps)
        self._m[key], self._v[key], self._t[key] = m, v, t
        return theta


class RmsPropOptimizer:
    def __init__(self, lr, decay=0.9, eps=1e-8):
        self.lr = lr
        self.decay = decay
        self.eps = eps
        self._v = {}

    def update(self, key, theta, grad):
        v = self._v.get(key, np.zeros_like(theta))
        theta, v = step_rmsprop(theta, grad, v, self.lr, self.decay, self.eps)
        self._v[key] = v
        return theta


def make_optimizer(name: str, lr: float):
    if name == "adam":
        return AdamOptimizer(lr)
    return RmsPropOptimizer(lr)
