import json

import pytest

from radlearn.config import default_config, load_config, parse_config
from radlearn.errors import ConfigError


def test_defaults_are_fixed_seeds():
    cfg = default_config()
    assert cfg.seeds.phantom == 1
    assert cfg.extraction.n_bins == 32
    assert cfg.train.batch_size == 4
    assert cfg.train.learning_rate == 1e-4
    assert cfg.rfe.k_folds == 5


def test_partial_document_fills_defaults():
    cfg = parse_config({"phantom": {"n_samples_per_class": 3}})
    assert cfg.phantom.n_samples_per_class == 3
    assert cfg.phantom.dims == (16, 16, 16)
    assert cfg.filter.alpha == 0.05


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match="unknown config section"):
        parse_config({"phantomm": {}})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config({"phantom": {"n_sample": 3}})


def test_tuple_coercion():
    cfg = parse_config({"phantom": {"dims": [8, 9, 10]},
                        "train": {"input_dims": [8, 8]}})
    assert cfg.phantom.dims == (8, 9, 10)
    assert cfg.train.input_dims == (8, 8)


def test_override_seeds():
    cfg = default_config()
    cfg.override_seeds(99)
    assert cfg.seeds.phantom == cfg.seeds.train == cfg.seeds.kfold == 99


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.json")


def test_load_config_bad_json(tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigError, match="valid JSON"):
        load_config(tmp_path / "bad.json")


def test_load_config_round_trip(tmp_path):
    doc = {"seeds": {"phantom": 42}, "rfe": {"k_folds": 3}}
    (tmp_path / "c.json").write_text(json.dumps(doc))
    cfg = load_config(tmp_path / "c.json")
    assert cfg.seeds.phantom == 42
    assert cfg.rfe.k_folds == 3
