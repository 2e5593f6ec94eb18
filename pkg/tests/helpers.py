"""Small constructors shared by the test modules."""

import numpy as np

from radlearn.quantize import QuantizedVolume
from radlearn.volume import RoiMask, Volume


def qvol(levels_zyx, n_bins):
    """QuantizedVolume from a (nz, ny, nx) level array (0 = outside mask)."""
    arr = np.asarray(levels_zyx, dtype=np.int32)
    nz, ny, nx = arr.shape
    return QuantizedVolume(dims=(nx, ny, nz), levels=arr.ravel(), n_bins=n_bins)


def mask_from_zyx(bits_zyx):
    arr = np.asarray(bits_zyx, dtype=np.uint8)
    nz, ny, nx = arr.shape
    return RoiMask(dims=(nx, ny, nz), bits=arr.ravel())


def full_mask(dims):
    nx, ny, nz = dims
    return RoiMask(dims=dims, bits=np.ones(nx * ny * nz, dtype=np.uint8))


def vol_from_values(values, dims, spacing=(1.0, 1.0, 1.0)):
    return Volume(dims=dims, spacing=spacing, modality_tag="SYN",
                  voxels=np.asarray(values, dtype=np.float32))
