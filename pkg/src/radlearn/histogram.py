"""Equal-width histogram shared by first-order entropy and the training trace."""

from __future__ import annotations

import numpy as np

from .errors import DataValidationError


def histogram(values, n_bins: int = 32) -> np.ndarray:
    """Bin counts over [min, max]; last bin right-inclusive.

    A constant input puts all mass in the first bin, so downstream entropy
    and trace plots stay defined for degenerate data.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise DataValidationError("cannot histogram an empty list")
    lo, hi = float(values.min()), float(values.max())
    counts = np.zeros(n_bins, dtype=np.int64)
    if lo == hi:
        counts[0] = values.size
        return counts
    counts, _ = np.histogram(values, bins=n_bins, range=(lo, hi))
    return counts.astype(np.int64)


def histogram_with_range(values, n_bins: int = 32):
    """(counts, lo, hi) variant used when the range must be recorded."""
    values = np.asarray(values, dtype=np.float64).ravel()
    counts = histogram(values, n_bins)
    return counts, float(values.min()), float(values.max())
