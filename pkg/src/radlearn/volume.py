"""Volume and ROI-mask data model, bit-exact on-disk format, synthetic phantoms.

A volume is stored as a pair of files: ``<base>.json`` (header with dims,
spacing, dtype and modality) and ``<base>.raw`` (little-endian 32-bit floats,
x-fastest order). Masks are stored next to their volume as ``<base>.mask.raw``,
one byte per voxel (0/1), same ordering.

Phantoms substitute for a real MRI cohort: class 0 is a smooth ellipsoidal
blob plus Gaussian noise, class 1 adds a 3D checkerboard texture inside the
ROI. The checkerboard moves texture-family features while leaving first-order
means nearly unchanged, which is exactly the "no visible cue" regime the rest
of the toolkit studies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataValidationError

_HEADER_DTYPE = "f32le"


@dataclass
class Volume:
    """Dense 3D scalar image.

    dims is (nx, ny, nz); voxels is a flat float32 array of length
    nx*ny*nz in x-fastest order (index = x + nx*(y + ny*z)).
    """

    dims: tuple[int, int, int]
    spacing: tuple[float, float, float]
    modality_tag: str
    voxels: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.spacing = tuple(float(s) for s in self.spacing)
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise DataValidationError(f"volume dims must be 3 positive integers, got {self.dims}")
        if len(self.spacing) != 3 or any(s <= 0 for s in self.spacing):
            raise DataValidationError(f"voxel spacing must be 3 positive reals, got {self.spacing}")
        self.voxels = np.ascontiguousarray(self.voxels, dtype=np.float32).ravel()
        n = self.dims[0] * self.dims[1] * self.dims[2]
        if self.voxels.size != n:
            raise DataValidationError(
                f"voxel count {self.voxels.size} does not match dims product {n}"
            )
        if not np.all(np.isfinite(self.voxels)):
            raise DataValidationError("volume contains non-finite voxel values")

    def as_zyx(self) -> np.ndarray:
        """View the flat buffer as a (nz, ny, nx) array (x varies fastest)."""
        nx, ny, nz = self.dims
        return self.voxels.reshape(nz, ny, nx)


@dataclass
class RoiMask:
    """Binary region-of-interest mask paired with a Volume of equal dims."""

    dims: tuple[int, int, int]
    bits: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise DataValidationError(f"mask dims must be 3 positive integers, got {self.dims}")
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8).ravel()
        n = self.dims[0] * self.dims[1] * self.dims[2]
        if self.bits.size != n:
            raise DataValidationError(f"mask length {self.bits.size} does not match dims product {n}")
        if not np.all((self.bits == 0) | (self.bits == 1)):
            raise DataValidationError("mask entries must be 0 or 1")

    def as_zyx(self) -> np.ndarray:
        nx, ny, nz = self.dims
        return self.bits.reshape(nz, ny, nx)

    def count(self) -> int:
        return int(self.bits.sum())


@dataclass
class PhantomSpec:
    """Recipe for a paired two-class synthetic dataset."""

    n_samples_per_class: int = 20
    dims: tuple[int, int, int] = (16, 16, 16)
    texture_amplitude: float = 2.0
    noise_sigma: float = 0.1
    seed: int = 0
    modality_tag: str = "SYN"
    blob_fraction: float = field(default=0.35, repr=False)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if self.n_samples_per_class < 1:
            raise DataValidationError("n_samples_per_class must be >= 1")
        if self.texture_amplitude < 0:
            raise DataValidationError("texture_amplitude must be >= 0")
        if self.noise_sigma < 0:
            raise DataValidationError("noise_sigma must be >= 0")
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise DataValidationError(f"phantom dims must be 3 positive integers, got {self.dims}")


def check_pair(v: Volume, m: RoiMask) -> None:
    """Validate that a mask belongs to a volume and is nonempty."""
    if v.dims != m.dims:
        raise DataValidationError(f"mask dims {m.dims} do not match volume dims {v.dims}")
    if m.count() == 0:
        raise DataValidationError("mask is empty; at least one voxel must be set")


def save_volume(v: Volume, path_base) -> None:
    """Write ``<path_base>.json`` + ``<path_base>.raw``."""
    path_base = str(path_base)
    if not np.all(np.isfinite(v.voxels)):
        raise DataValidationError("refusing to save volume with non-finite voxels")
    header = {
        "dims": list(v.dims),
        "spacing": list(v.spacing),
        "dtype": _HEADER_DTYPE,
        "modality": v.modality_tag,
    }
    with open(path_base + ".json", "w", encoding="utf-8") as fh:
        json.dump(header, fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(path_base + ".raw", "wb") as fh:
        fh.write(v.voxels.astype("<f4").tobytes())


def load_volume(path_base) -> Volume:
    """Read a volume written by save_volume, verifying all invariants."""
    path_base = str(path_base)
    with open(path_base + ".json", "r", encoding="utf-8") as fh:
        try:
            header = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataValidationError(f"malformed volume header {path_base}.json: {exc}") from exc
    for key in ("dims", "spacing", "dtype", "modality"):
        if key not in header:
            raise DataValidationError(f"volume header missing key {key!r}")
    if header["dtype"] != _HEADER_DTYPE:
        raise DataValidationError(f"unsupported dtype {header['dtype']!r}")
    dims = header["dims"]
    if len(dims) != 3 or any(not isinstance(d, int) or d < 1 for d in dims):
        raise DataValidationError(f"header dims must be 3 positive integers, got {dims}")
    n = dims[0] * dims[1] * dims[2]
    with open(path_base + ".raw", "rb") as fh:
        blob = fh.read()
    if len(blob) != 4 * n:
        raise DataValidationError(
            f"raw file length {len(blob)} bytes does not match dims {dims} (expected {4 * n})"
        )
    voxels = np.frombuffer(blob, dtype="<f4").copy()
    return Volume(dims=tuple(dims), spacing=tuple(header["spacing"]),
                  modality_tag=header["modality"], voxels=voxels)


def save_mask(m: RoiMask, path_base) -> None:
    """Write ``<path_base>.mask.raw`` (one byte per voxel, 0/1)."""
    with open(str(path_base) + ".mask.raw", "wb") as fh:
        fh.write(m.bits.tobytes())


def load_mask(path_base, dims) -> RoiMask:
    """Read a mask written by save_mask; dims come from the paired volume."""
    dims = tuple(int(d) for d in dims)
    n = dims[0] * dims[1] * dims[2]
    with open(str(path_base) + ".mask.raw", "rb") as fh:
        blob = fh.read()
    if len(blob) != n:
        raise DataValidationError(
            f"mask file length {len(blob)} does not match dims {dims} (expected {n})"
        )
    bits = np.frombuffer(blob, dtype=np.uint8).copy()
    return RoiMask(dims=dims, bits=bits)


def roi_slice_index(m: RoiMask) -> int:
    """Axial slice with the largest in-mask pixel count; ties -> lowest z."""
    counts = m.as_zyx().sum(axis=(1, 2))
    return int(np.argmax(counts))


def _blob_field(dims, fraction):
    """Quadratic-falloff ellipsoid centered in the grid.

    Returns (profile, support): profile = 1 - r^2 inside the ellipsoid,
    0 outside; support is the boolean ROI.
    """
    nx, ny, nz = dims
    z, y, x = np.meshgrid(np.arange(nz), np.arange(ny), np.arange(nx), indexing="ij")
    cx, cy, cz = (nx - 1) / 2.0, (ny - 1) / 2.0, (nz - 1) / 2.0
    ax, ay, az = fraction * nx, fraction * ny, fraction * nz
    r2 = ((x - cx) / ax) ** 2 + ((y - cy) / ay) ** 2 + ((z - cz) / az) ** 2
    support = r2 <= 1.0
    profile = np.where(support, 1.0 - r2, 0.0)
    return profile, support


def _checkerboard(dims):
    nx, ny, nz = dims
    z, y, x = np.meshgrid(np.arange(nz), np.arange(ny), np.arange(nx), indexing="ij")
    return np.where((x + y + z) % 2 == 0, 1.0, -1.0)


def generate_phantom(spec: PhantomSpec) -> list[tuple[Volume, RoiMask, int]]:
    """Deterministic paired two-class phantom set.

    Sample i of class 0 and sample i of class 1 share the same noise
    sub-seed, so at texture_amplitude 0 the two classes are voxel-identical.
    Class 1 differs only by the checkerboard term inside the ROI.
    """
    if any(d < 8 for d in spec.dims):
        raise DataValidationError(f"phantom dims must be >= 8 per axis, got {spec.dims}")
    profile, support = _blob_field(spec.dims, spec.blob_fraction)
    checker = _checkerboard(spec.dims) * support
    mask = RoiMask(dims=spec.dims, bits=np.ascontiguousarray(support, dtype=np.uint8).ravel())

    out: list[tuple[Volume, RoiMask, int]] = []
    for label in (0, 1):
        for i in range(spec.n_samples_per_class):
            # noise stream keyed by sample index only, shared across classes
            rng = np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(i,)))
            noise = rng.normal(0.0, spec.noise_sigma, size=spec.dims[::-1]) if spec.noise_sigma > 0 \
                else np.zeros(spec.dims[::-1])
            field3d = profile + noise
            if label == 1:
                field3d = field3d + spec.texture_amplitude * checker
            vol = Volume(dims=spec.dims, spacing=(1.0, 1.0, 1.0),
                         modality_tag=spec.modality_tag,
                         voxels=field3d.astype(np.float32).ravel())
            out.append((vol, mask, label))
    return out
