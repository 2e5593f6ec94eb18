"""Feature formulas on hand-enumerable matrices and degenerate conventions."""

import numpy as np
import pytest

from helpers import qvol
from oracles import random_level_grid

from radlearn.errors import DataValidationError
from radlearn.features import (
    GLCM_FEATURES,
    GLDM_FEATURES,
    GLRLM_FEATURES,
    GLSZM_FEATURES,
    NGTDM_FEATURES,
    TextureMatrix,
    glcm,
    glcm_features,
    gldm,
    gldm_features,
    glrlm,
    glrlm_features,
    glszm,
    glszm_features,
    ngtdm,
    ngtdm_features,
)


def test_glcm_two_level_diagonal_matrix():
    m = TextureMatrix(kind="GLCM", data=np.array([[0.5, 0.0], [0.0, 0.5]]), n_levels=2)
    fv = glcm_features(m)
    assert fv["glcm.JointEnergy"] == pytest.approx(0.5)
    assert fv["glcm.Contrast"] == 0.0
    assert fv["glcm.MaximumProbability"] == pytest.approx(0.5)
    assert fv["glcm.JointEntropy"] == pytest.approx(1.0)
    assert fv["glcm.JointAverage"] == pytest.approx(1.5)
    assert fv["glcm.SumAverage"] == pytest.approx(3.0)
    assert fv["glcm.Correlation"] == pytest.approx(1.0)  # perfectly diagonal
    assert fv["glcm.SumSquares"] == pytest.approx(0.25)
    assert fv["glcm.Autocorrelation"] == pytest.approx(2.5)
    assert fv["glcm.Id"] == pytest.approx(1.0)
    assert fv["glcm.Idm"] == pytest.approx(1.0)
    assert fv["glcm.DifferenceAverage"] == 0.0
    assert fv["glcm.InverseVariance"] == 0.0


def test_glcm_constant_image_conventions():
    lvl = np.ones((2, 2, 2), dtype=np.int32)
    fv = glcm_features(glcm(qvol(lvl, 4)))
    assert fv["glcm.JointEntropy"] == 0.0
    assert fv["glcm.Id"] == 1.0
    assert fv["glcm.Contrast"] == 0.0
    assert fv["glcm.Correlation"] == 1.0
    assert fv["glcm.MCC"] == 1.0
    assert fv["glcm.Imc1"] == 0.0
    assert fv["glcm.Imc2"] == 0.0
    assert fv["glcm.MaximumProbability"] == 1.0


def test_glcm_checkerboard_contrast_one():
    # alternating two-level pattern along x, single direction: all mass at |i-j|=1
    lvl = np.zeros((1, 1, 6), dtype=np.int32)
    lvl[0, 0, :] = [1, 2, 1, 2, 1, 2]
    fv = glcm_features(glcm(qvol(lvl, 2), directions=[(1, 0, 0)]))
    assert fv["glcm.Contrast"] == pytest.approx(1.0)
    assert fv["glcm.DifferenceAverage"] == pytest.approx(1.0)
    assert fv["glcm.JointEnergy"] == pytest.approx(0.5)


def test_glcm_unnormalized_matrix_rejected():
    m = TextureMatrix(kind="GLCM", data=np.array([[2.0, 0.0], [0.0, 2.0]]), n_levels=2)
    with pytest.raises(DataValidationError, match="normalized"):
        glcm_features(m)


def test_glcm_feature_count_and_order():
    lvl = np.ones((2, 2, 2), dtype=np.int32)
    fv = glcm_features(glcm(qvol(lvl, 2)))
    assert fv.names == [f"glcm.{n}" for n in GLCM_FEATURES]
    assert len(fv) == 24


def test_glrlm_short_run_emphasis_hand_case():
    lvl = np.array([[[1, 1, 2]]])
    fv = glrlm_features(glrlm(qvol(lvl, 2), directions=[(1, 0, 0)]))
    assert fv["glrlm.ShortRunEmphasis"] == pytest.approx(0.625)
    assert fv["glrlm.LongRunEmphasis"] == pytest.approx((4 + 1) / 2)
    assert fv["glrlm.RunPercentage"] == pytest.approx(2 / 3)
    assert fv["glrlm.GrayLevelNonUniformity"] == pytest.approx(1.0)
    assert fv["glrlm.RunEntropy"] == pytest.approx(1.0)


def test_glrlm_constant_single_voxel_run_percentage_one():
    lvl = np.ones((1, 1, 1), dtype=np.int32)
    fv = glrlm_features(glrlm(qvol(lvl, 1)))
    assert fv["glrlm.RunPercentage"] == pytest.approx(1.0)
    assert fv["glrlm.ShortRunEmphasis"] == pytest.approx(1.0)


def test_glrlm_feature_count():
    lvl = np.ones((2, 2, 1), dtype=np.int32)
    fv = glrlm_features(glrlm(qvol(lvl, 1)))
    assert fv.names == [f"glrlm.{n}" for n in GLRLM_FEATURES]


def test_glszm_hand_case():
    # zones: one 3-voxel zone of level 1, one singleton of level 2
    lvl = np.array([[[1, 1], [1, 2]]])
    fv = glszm_features(glszm(qvol(lvl, 2)))
    # SAE = (1/9 + 1)/2
    assert fv["glszm.SmallAreaEmphasis"] == pytest.approx((1 / 9 + 1) / 2)
    assert fv["glszm.ZonePercentage"] == pytest.approx(2 / 4)
    assert fv["glszm.GrayLevelNonUniformity"] == pytest.approx(1.0)


def test_glszm_feature_count():
    lvl = np.ones((2, 2, 1), dtype=np.int32)
    fv = glszm_features(glszm(qvol(lvl, 1)))
    assert fv.names == [f"glszm.{n}" for n in GLSZM_FEATURES]


def test_ngtdm_constant_volume_conventions():
    lvl = np.ones((2, 2, 2), dtype=np.int32)
    fv = ngtdm_features(ngtdm(qvol(lvl, 2)))
    assert fv["ngtdm.Contrast"] == 0.0
    assert fv["ngtdm.Coarseness"] == 1e6
    assert fv["ngtdm.Busyness"] == 0.0
    assert fv["ngtdm.Strength"] == 0.0


def test_ngtdm_hand_case_1x3():
    # n = [2,1], p = [2/3,1/3], s = [2,1]
    lvl = np.array([[[1], [2], [1]]])
    fv = ngtdm_features(ngtdm(qvol(lvl, 2)))
    assert fv["ngtdm.Coarseness"] == pytest.approx(0.6)
    assert fv["ngtdm.Contrast"] == pytest.approx(2 / 9)
    assert fv["ngtdm.Busyness"] == 0.0  # |1*2/3 - 2*1/3| = 0 denominator
    assert fv["ngtdm.Complexity"] == pytest.approx(10 / 9)
    assert fv["ngtdm.Strength"] == pytest.approx(2 / 3)


def test_ngtdm_feature_count():
    lvl = np.ones((2, 2, 1), dtype=np.int32)
    fv = ngtdm_features(ngtdm(qvol(lvl, 1)))
    assert fv.names == [f"ngtdm.{n}" for n in NGTDM_FEATURES]


def test_gldm_hand_case():
    # P(1,2)=3, P(2,0)=1; dependence j uses j+1 in formulas
    lvl = np.array([[[1, 1], [1, 2]]])
    fv = gldm_features(gldm(qvol(lvl, 2), alpha=0))
    # SDE = (3/(3^2) + 1/(1^2))/4
    assert fv["gldm.SmallDependenceEmphasis"] == pytest.approx((3 / 9 + 1) / 4)
    assert fv["gldm.LargeDependenceEmphasis"] == pytest.approx((3 * 9 + 1) / 4)
    assert fv["gldm.GrayLevelNonUniformity"] == pytest.approx((9 + 1) / 4)
    assert fv["gldm.HighGrayLevelEmphasis"] == pytest.approx((3 * 1 + 1 * 4) / 4)


def test_gldm_feature_count():
    lvl = np.ones((2, 2, 1), dtype=np.int32)
    fv = gldm_features(gldm(qvol(lvl, 1)))
    assert fv.names == [f"gldm.{n}" for n in GLDM_FEATURES]


def test_all_families_finite_on_random_and_degenerate_grids():
    rng = np.random.default_rng(99)
    grids = [random_level_grid(rng, (4, 4, 4), 5) for _ in range(20)]
    grids.append(np.ones((3, 3, 3), dtype=np.int32))  # constant
    two = np.ones((2, 2, 2), dtype=np.int32)
    two[0, 0, 0] = 2
    grids.append(two)
    for lvl in grids:
        q = qvol(lvl, 5)
        vectors = [
            glcm_features(glcm(q)),
            glrlm_features(glrlm(q)),
            glszm_features(glszm(q)),
            ngtdm_features(ngtdm(q)),
            gldm_features(gldm(q)),
        ]
        for fv in vectors:
            assert np.all(np.isfinite(fv.values))


def test_kind_mismatch_rejected():
    lvl = np.ones((2, 2, 1), dtype=np.int32)
    with pytest.raises(DataValidationError):
        glcm_features(glrlm(qvol(lvl, 1)))
