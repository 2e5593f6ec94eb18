"""First-order intensity statistics over the ROI.

The default registry is the nine most common statistics. Entropy uses a
32-bin equal-width histogram (log base 2, 0*log0 = 0); Variance is the
population variance; Kurtosis is Fisher's excess kurtosis. Skewness and
Kurtosis are 0 by convention when the variance is 0, which keeps every
output finite on constant regions.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataValidationError
from ..histogram import histogram
from ..volume import RoiMask, Volume, check_pair
from .vector import FeatureVector

_ENTROPY_BINS = 32


def _mean(x):
    return float(np.mean(x))


def _median(x):
    return float(np.median(x))


def _variance(x):
    return float(np.var(x))


def _skewness(x):
    var = np.var(x)
    if var == 0:
        return 0.0
    m3 = np.mean((x - np.mean(x)) ** 3)
    return float(m3 / var ** 1.5)


def _kurtosis(x):
    var = np.var(x)
    if var == 0:
        return 0.0
    m4 = np.mean((x - np.mean(x)) ** 4)
    return float(m4 / var ** 2 - 3.0)


def _energy(x):
    return float(np.sum(x ** 2))


def _entropy(x):
    counts = histogram(x, _ENTROPY_BINS)
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log2(p)))


def _minimum(x):
    return float(np.min(x))


def _maximum(x):
    return float(np.max(x))


FIRST_ORDER_FEATURES = {
    "Mean": _mean,
    "Median": _median,
    "Variance": _variance,
    "Skewness": _skewness,
    "Kurtosis": _kurtosis,
    "Energy": _energy,
    "Entropy": _entropy,
    "Minimum": _minimum,
    "Maximum": _maximum,
}


def first_order(v: Volume, m: RoiMask, names=None) -> FeatureVector:
    """Compute the registered first-order statistics over in-mask voxels."""
    check_pair(v, m)
    if names is None:
        names = list(FIRST_ORDER_FEATURES)
    unknown = [n for n in names if n not in FIRST_ORDER_FEATURES]
    if unknown:
        raise DataValidationError(f"unknown first-order features: {unknown}")
    x = v.voxels[m.bits.astype(bool)].astype(np.float64)
    values = [FIRST_ORDER_FEATURES[n](x) for n in names]
    return FeatureVector(names=[f"firstorder.{n}" for n in names], values=np.array(values))
