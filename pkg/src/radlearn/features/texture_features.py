"""Feature formulas over the texture matrices.

The formulas follow the widely used reference definitions for each family;
every name below is the contract, and the math is implemented exactly as
documented in the README feature table. Degenerate single-level regions take
fixed conventional values (Correlation/MCC 1, Imc1/Imc2 0, NGTDM Coarseness
capped at 1e6, ...) so the pipeline never emits a non-finite number.

Gray level values are the bin indices 1..n_bins; formulas that need a level
use the value, not the row position. 0*log(0) is taken to be 0 throughout.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataValidationError
from .matrices import TextureMatrix
from .vector import FeatureVector

NGTDM_COARSENESS_CAP = 1e6

GLCM_FEATURES = [
    "Autocorrelation", "JointAverage", "ClusterProminence", "ClusterShade",
    "ClusterTendency", "Contrast", "Correlation", "DifferenceAverage",
    "DifferenceEntropy", "DifferenceVariance", "JointEnergy", "JointEntropy",
    "Imc1", "Imc2", "Idm", "Idmn", "Id", "Idn", "InverseVariance",
    "MaximumProbability", "SumAverage", "SumEntropy", "SumSquares", "MCC",
]

GLRLM_FEATURES = [
    "ShortRunEmphasis", "LongRunEmphasis", "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized", "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized", "RunPercentage", "GrayLevelVariance",
    "RunVariance", "RunEntropy", "LowGrayLevelRunEmphasis",
    "HighGrayLevelRunEmphasis", "ShortRunLowGrayLevelEmphasis",
    "ShortRunHighGrayLevelEmphasis", "LongRunLowGrayLevelEmphasis",
    "LongRunHighGrayLevelEmphasis",
]

GLSZM_FEATURES = [
    "SmallAreaEmphasis", "LargeAreaEmphasis", "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized", "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized", "ZonePercentage", "GrayLevelVariance",
    "ZoneVariance", "ZoneEntropy", "LowGrayLevelZoneEmphasis",
    "HighGrayLevelZoneEmphasis", "SmallAreaLowGrayLevelEmphasis",
    "SmallAreaHighGrayLevelEmphasis", "LargeAreaLowGrayLevelEmphasis",
    "LargeAreaHighGrayLevelEmphasis",
]

NGTDM_FEATURES = ["Coarseness", "Contrast", "Busyness", "Complexity", "Strength"]

GLDM_FEATURES = [
    "SmallDependenceEmphasis", "LargeDependenceEmphasis",
    "GrayLevelNonUniformity", "DependenceNonUniformity",
    "DependenceNonUniformityNormalized", "GrayLevelVariance",
    "DependenceVariance", "DependenceEntropy", "LowGrayLevelEmphasis",
    "HighGrayLevelEmphasis", "SmallDependenceLowGrayLevelEmphasis",
    "SmallDependenceHighGrayLevelEmphasis", "LargeDependenceLowGrayLevelEmphasis",
    "LargeDependenceHighGrayLevelEmphasis",
]


def _check_kind(m: TextureMatrix, kind: str) -> None:
    if m.kind != kind:
        raise DataValidationError(f"expected a {kind} matrix, got {m.kind}")


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def _vector(family: str, names, values) -> FeatureVector:
    return FeatureVector(names=[f"{family}.{n}" for n in names],
                         values=np.array(values, dtype=np.float64))


def glcm_features(m: TextureMatrix) -> FeatureVector:
    _check_kind(m, "GLCM")
    if abs(float(m.data.sum()) - 1.0) > 1e-9:
        raise DataValidationError("GLCM must be normalized to sum 1")
    occ = m.data.sum(axis=1) > 0  # symmetric, so row and column support agree
    iv = np.flatnonzero(occ).astype(np.float64) + 1.0
    p = m.data[np.ix_(occ, occ)]
    n_occ = iv.size
    degenerate = n_occ < 2

    px = p.sum(axis=1)  # equals py by symmetry
    mu = float(np.sum(iv * px))
    sigma2 = float(np.sum((iv - mu) ** 2 * px))
    i_mat = iv[:, None]
    j_mat = iv[None, :]

    ksum = (i_mat + j_mat).astype(np.int64)
    p_plus = np.bincount(ksum.ravel(), weights=p.ravel())
    kplus = np.arange(p_plus.size, dtype=np.float64)
    kdiff = np.abs(i_mat - j_mat).astype(np.int64)
    p_minus = np.bincount(kdiff.ravel(), weights=p.ravel())
    kminus = np.arange(p_minus.size, dtype=np.float64)

    autocorrelation = float(np.sum(i_mat * j_mat * p))
    cluster_arg = i_mat + j_mat - 2.0 * mu
    contrast = float(np.sum((i_mat - j_mat) ** 2 * p))
    diff_avg = float(np.sum(kminus * p_minus))
    joint_entropy = _entropy_bits(p.ravel())
    hx = _entropy_bits(px)
    pxpy = px[:, None] * px[None, :]
    pos = p > 0
    hxy1 = float(-np.sum(p[pos] * np.log2(pxpy[pos])))
    pos_m = pxpy > 0
    hxy2 = float(-np.sum(pxpy[pos_m] * np.log2(pxpy[pos_m])))
    ng = float(iv.max())

    if degenerate:
        correlation, imc1, imc2, mcc = 1.0, 0.0, 0.0, 1.0
    else:
        correlation = 1.0 if sigma2 == 0 else float((autocorrelation - mu * mu) / sigma2)
        imc1 = 0.0 if hx == 0 else float((joint_entropy - hxy1) / hx)
        imc2 = float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - joint_entropy)))))
        q = (p[:, None, :] * p[None, :, :]) / (px[:, None, None] * px[None, None, :])
        q = q.sum(axis=2)
        eigs = np.sort(np.linalg.eigvals(q).real)
        mcc = float(np.sqrt(min(max(eigs[-2], 0.0), 1.0)))

    values = {
        "Autocorrelation": autocorrelation,
        "JointAverage": mu,
        "ClusterProminence": float(np.sum(cluster_arg ** 4 * p)),
        "ClusterShade": float(np.sum(cluster_arg ** 3 * p)),
        "ClusterTendency": float(np.sum(cluster_arg ** 2 * p)),
        "Contrast": contrast,
        "Correlation": correlation,
        "DifferenceAverage": diff_avg,
        "DifferenceEntropy": _entropy_bits(p_minus),
        "DifferenceVariance": float(np.sum((kminus - diff_avg) ** 2 * p_minus)),
        "JointEnergy": float(np.sum(p ** 2)),
        "JointEntropy": joint_entropy,
        "Imc1": imc1,
        "Imc2": imc2,
        "Idm": float(np.sum(p_minus / (1.0 + kminus ** 2))),
        "Idmn": float(np.sum(p_minus / (1.0 + (kminus / ng) ** 2))),
        "Id": float(np.sum(p_minus / (1.0 + kminus))),
        "Idn": float(np.sum(p_minus / (1.0 + kminus / ng))),
        "InverseVariance": float(np.sum(p_minus[1:] / kminus[1:] ** 2)) if p_minus.size > 1 else 0.0,
        "MaximumProbability": float(p.max()),
        "SumAverage": float(np.sum(kplus * p_plus)),
        "SumEntropy": _entropy_bits(p_plus),
        "SumSquares": float(np.sum((i_mat - mu) ** 2 * p)),
        "MCC": mcc,
    }
    return _vector("glcm", GLCM_FEATURES, [values[n] for n in GLCM_FEATURES])


def _run_style_features(counts: np.ndarray, percentage_total: float):
    """Shared math for GLRLM (runs) and GLSZM (zones).

    counts is (n_levels, max_j); percentage_total is the denominator of the
    percentage feature (voxels*directions for runs, voxels for zones).
    """
    n = float(counts.sum())
    iv = np.arange(1, counts.shape[0] + 1, dtype=np.float64)[:, None]
    jv = np.arange(1, counts.shape[1] + 1, dtype=np.float64)[None, :]
    p = counts / n
    mu_i = float(np.sum(iv * p))
    mu_j = float(np.sum(jv * p))
    return {
        "short": float(np.sum(counts / jv ** 2) / n),
        "long": float(np.sum(counts * jv ** 2) / n),
        "gln": float(np.sum(counts.sum(axis=1) ** 2) / n),
        "glnn": float(np.sum(counts.sum(axis=1) ** 2) / n ** 2),
        "jn": float(np.sum(counts.sum(axis=0) ** 2) / n),
        "jnn": float(np.sum(counts.sum(axis=0) ** 2) / n ** 2),
        "percentage": float(n / percentage_total),
        "glv": float(np.sum((iv - mu_i) ** 2 * p)),
        "jv": float(np.sum((jv - mu_j) ** 2 * p)),
        "entropy": _entropy_bits(p.ravel()),
        "lgl": float(np.sum(counts / iv ** 2) / n),
        "hgl": float(np.sum(counts * iv ** 2) / n),
        "short_lgl": float(np.sum(counts / (iv ** 2 * jv ** 2)) / n),
        "short_hgl": float(np.sum(counts * iv ** 2 / jv ** 2) / n),
        "long_lgl": float(np.sum(counts * jv ** 2 / iv ** 2) / n),
        "long_hgl": float(np.sum(counts * iv ** 2 * jv ** 2) / n),
    }


_RUN_KEY_ORDER = ["short", "long", "gln", "glnn", "jn", "jnn", "percentage",
                  "glv", "jv", "entropy", "lgl", "hgl", "short_lgl",
                  "short_hgl", "long_lgl", "long_hgl"]


def glrlm_features(m: TextureMatrix) -> FeatureVector:
    _check_kind(m, "GLRLM")
    jv = np.arange(1, m.data.shape[1] + 1, dtype=np.float64)[None, :]
    voxels_times_dirs = float(np.sum(m.data * jv))  # runs partition voxels per direction
    stats = _run_style_features(m.data, voxels_times_dirs)
    return _vector("glrlm", GLRLM_FEATURES, [stats[k] for k in _RUN_KEY_ORDER])


def glszm_features(m: TextureMatrix) -> FeatureVector:
    _check_kind(m, "GLSZM")
    sv = np.arange(1, m.data.shape[1] + 1, dtype=np.float64)[None, :]
    voxel_count = float(np.sum(m.data * sv))  # zones partition voxels
    stats = _run_style_features(m.data, voxel_count)
    return _vector("glszm", GLSZM_FEATURES, [stats[k] for k in _RUN_KEY_ORDER])


def ngtdm_features(m: TextureMatrix) -> FeatureVector:
    _check_kind(m, "NGTDM")
    n_i, p_i, s_i = m.data[:, 0], m.data[:, 1], m.data[:, 2]
    occ = p_i > 0
    iv = np.flatnonzero(occ).astype(np.float64) + 1.0
    pv = p_i[occ]
    sv = s_i[occ]
    n_vp = float(n_i.sum())
    n_gp = int(occ.sum())

    ps = float(np.sum(pv * sv))
    coarseness = NGTDM_COARSENESS_CAP if ps == 0 else min(1.0 / ps, NGTDM_COARSENESS_CAP)

    if n_gp < 2:
        contrast = busyness = strength = 0.0
        complexity = 0.0
    else:
        di = iv[:, None] - iv[None, :]
        pp = pv[:, None] * pv[None, :]
        contrast = float(np.sum(pp * di ** 2) / (n_gp * (n_gp - 1)) * (sv.sum() / n_vp))
        busy_den = float(np.sum(np.abs(iv[:, None] * pv[:, None] - iv[None, :] * pv[None, :])))
        busyness = 0.0 if busy_den == 0 else float(ps / busy_den)
        ps_pair = pv[:, None] * sv[:, None] + pv[None, :] * sv[None, :]
        complexity = float(np.sum(np.abs(di) * ps_pair / (pv[:, None] + pv[None, :])) / n_vp)
        s_total = float(sv.sum())
        strength = 0.0 if s_total == 0 else float(np.sum((pv[:, None] + pv[None, :]) * di ** 2) / s_total)

    values = [coarseness, contrast, busyness, complexity, strength]
    return _vector("ngtdm", NGTDM_FEATURES, values)


def gldm_features(m: TextureMatrix) -> FeatureVector:
    _check_kind(m, "GLDM")
    counts = m.data
    n = float(counts.sum())
    iv = np.arange(1, counts.shape[0] + 1, dtype=np.float64)[:, None]
    # dependence j is a neighbor count starting at 0; formulas use j+1
    dv = np.arange(1, counts.shape[1] + 1, dtype=np.float64)[None, :]
    p = counts / n
    mu_i = float(np.sum(iv * p))
    mu_d = float(np.sum(dv * p))
    values = {
        "SmallDependenceEmphasis": float(np.sum(counts / dv ** 2) / n),
        "LargeDependenceEmphasis": float(np.sum(counts * dv ** 2) / n),
        "GrayLevelNonUniformity": float(np.sum(counts.sum(axis=1) ** 2) / n),
        "DependenceNonUniformity": float(np.sum(counts.sum(axis=0) ** 2) / n),
        "DependenceNonUniformityNormalized": float(np.sum(counts.sum(axis=0) ** 2) / n ** 2),
        "GrayLevelVariance": float(np.sum((iv - mu_i) ** 2 * p)),
        "DependenceVariance": float(np.sum((dv - mu_d) ** 2 * p)),
        "DependenceEntropy": _entropy_bits(p.ravel()),
        "LowGrayLevelEmphasis": float(np.sum(counts / iv ** 2) / n),
        "HighGrayLevelEmphasis": float(np.sum(counts * iv ** 2) / n),
        "SmallDependenceLowGrayLevelEmphasis": float(np.sum(counts / (iv ** 2 * dv ** 2)) / n),
        "SmallDependenceHighGrayLevelEmphasis": float(np.sum(counts * iv ** 2 / dv ** 2) / n),
        "LargeDependenceLowGrayLevelEmphasis": float(np.sum(counts * dv ** 2 / iv ** 2) / n),
        "LargeDependenceHighGrayLevelEmphasis": float(np.sum(counts * iv ** 2 * dv ** 2) / n),
    }
    return _vector("gldm", GLDM_FEATURES, [values[k] for k in GLDM_FEATURES])
