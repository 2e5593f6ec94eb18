"""Whole-sample feature extraction: all seven families in a fixed order."""

from __future__ import annotations

from ..quantize import quantize_fixed_bins
from ..volume import RoiMask, Volume, check_pair
from . import vector
from .firstorder import first_order
from .matrices import glcm, gldm, glrlm, glszm, ngtdm
from .shape2d import shape_2d
from .texture_features import (
    gldm_features,
    glcm_features,
    glrlm_features,
    glszm_features,
    ngtdm_features,
)

FAMILY_COUNTS = {
    "firstorder": 9,
    "shape2d": 10,
    "glcm": 24,
    "glrlm": 16,
    "glszm": 16,
    "ngtdm": 5,
    "gldm": 14,
}
TOTAL_FEATURES = sum(FAMILY_COUNTS.values())


def extract_all(v: Volume, m: RoiMask, n_bins: int = 32, distance: int = 1,
                alpha: int = 0) -> vector.FeatureVector:
    """94 named features: firstorder, shape2d, glcm, glrlm, glszm, ngtdm, gldm."""
    check_pair(v, m)
    q = quantize_fixed_bins(v, m, n_bins)
    parts = [
        first_order(v, m),
        shape_2d(m, spacing=v.spacing),
        glcm_features(glcm(q, distance=distance)),
        glrlm_features(glrlm(q)),
        glszm_features(glszm(q)),
        ngtdm_features(ngtdm(q)),
        gldm_features(gldm(q, alpha=alpha)),
    ]
    return vector.concat(parts)
