import time
from collections import Counter

import numpy as np
import pytest

from radlearn.features import FAMILY_COUNTS, TOTAL_FEATURES, extract_all
from radlearn.volume import PhantomSpec, generate_phantom


@pytest.fixture(scope="module")
def phantom_pair():
    spec = PhantomSpec(n_samples_per_class=1, dims=(12, 12, 12),
                       texture_amplitude=2.0, noise_sigma=0.1, seed=42)
    samples = generate_phantom(spec)
    return samples[0], samples[1]  # (class 0, class 1)


def test_census_94_features(phantom_pair):
    (v, m, _), _ = phantom_pair
    fv = extract_all(v, m)
    assert len(fv) == TOTAL_FEATURES == 94
    families = Counter(name.split(".")[0] for name in fv.names)
    assert families == FAMILY_COUNTS


def test_extraction_is_deterministic(phantom_pair):
    (v, m, _), _ = phantom_pair
    a = extract_all(v, m)
    b = extract_all(v, m)
    assert a.names == b.names
    assert np.array_equal(a.values, b.values)


def test_texture_contrast_separates_classes(phantom_pair):
    (v0, m0, _), (v1, m1, _) = phantom_pair
    f0 = extract_all(v0, m0)
    f1 = extract_all(v1, m1)
    assert f1["glcm.Contrast"] > f0["glcm.Contrast"]


def test_all_values_finite(phantom_pair):
    (v, m, _), _ = phantom_pair
    fv = extract_all(v, m)
    assert np.all(np.isfinite(fv.values))


def test_runtime_under_one_second_on_64_cube():
    spec = PhantomSpec(n_samples_per_class=1, dims=(64, 64, 64),
                       texture_amplitude=2.0, noise_sigma=0.1, seed=3)
    v, m, _ = generate_phantom(spec)[0]
    start = time.perf_counter()
    fv = extract_all(v, m)
    elapsed = time.perf_counter() - start
    assert len(fv) == 94
    assert elapsed < 1.0, f"extraction took {elapsed:.2f}s"
