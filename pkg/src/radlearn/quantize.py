"""Gray-level discretization of masked voxels.

Fixed bin COUNT (default 32) rather than fixed bin width, so texture matrix
sizes stay bounded regardless of intensity scale. Levels are 1..n_bins inside
the mask and 0 outside; a constant in-mask region maps everything to level 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataValidationError
from .volume import RoiMask, Volume, check_pair

DEFAULT_BINS = 32


@dataclass
class QuantizedVolume:
    dims: tuple[int, int, int]
    levels: np.ndarray  # flat int32, x-fastest, 0 outside the mask
    n_bins: int

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.levels = np.ascontiguousarray(self.levels, dtype=np.int32).ravel()
        if self.n_bins < 1:
            raise DataValidationError("n_bins must be >= 1")
        if self.levels.min() < 0 or self.levels.max() > self.n_bins:
            raise DataValidationError("levels must lie in {0} union [1, n_bins]")

    def as_zyx(self) -> np.ndarray:
        nx, ny, nz = self.dims
        return self.levels.reshape(nz, ny, nx)

    def mask_count(self) -> int:
        return int(np.count_nonzero(self.levels))


def quantize_fixed_bins(v: Volume, m: RoiMask, n_bins: int = DEFAULT_BINS) -> QuantizedVolume:
    """Map in-mask intensities to levels 1..n_bins over the in-mask range.

    level = min(n_bins, floor((x - lo) / (hi - lo) * n_bins) + 1); a
    degenerate range (hi == lo) maps every in-mask voxel to level 1.
    """
    check_pair(v, m)
    if n_bins < 1:
        raise DataValidationError("n_bins must be >= 1")
    inside = m.bits.astype(bool)
    vals = v.voxels[inside].astype(np.float64)
    lo, hi = float(vals.min()), float(vals.max())
    levels = np.zeros(v.voxels.size, dtype=np.int32)
    if hi == lo:
        levels[inside] = 1
    else:
        scaled = np.floor((vals - lo) / (hi - lo) * n_bins).astype(np.int64) + 1
        levels[inside] = np.minimum(scaled, n_bins).astype(np.int32)
    return QuantizedVolume(dims=v.dims, levels=levels, n_bins=n_bins)
