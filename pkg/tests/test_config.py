from datetime import date
from pathlib import Path

import pytest

from stigpattern.config import (
    CONFIG_ENV,
    OUT_ENV,
    SEED_ENV,
    DetectionConfig,
    PipelineConfig,
    config_from_dict,
    load_config,
)
from stigpattern.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in (CONFIG_ENV, OUT_ENV, SEED_ENV):
        monkeypatch.delenv(name, raising=False)


def test_defaults_without_file():
    config = load_config()
    assert config == PipelineConfig()
    assert config.binning.step_minutes == 5
    assert config.srf.window == 72 and config.srf.window_hop == 36
    assert config.clustering.c == 3 and config.clustering.m == 2.0
    assert config.hotspots.relevance_quantile == 0.9
    assert config.binning.chunk_rows == 100_000
    # full DE budget unless a config file asks for less
    assert (config.training.population, config.training.generations) == (20, 100)
    assert (config.day_similarity.population, config.day_similarity.generations) == (20, 100)
    assert config.seed == 0


def test_file_values_and_relative_paths(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        '[paths]\ninput = "data/trips.csv"\nout_dir = "out"\n'
        "[seeds]\nbase = 11\n"
        "[clustering]\nc = 4\nm = 2\n"
        "[training]\ngenerations = 5.0\n"
    )
    config = load_config(path)
    assert config.paths.input == str((tmp_path / "data/trips.csv").resolve())
    assert config.out_dir == (tmp_path / "out").resolve()
    assert config.seed == 11
    assert config.clustering.c == 4
    assert config.training.generations == 5
    assert config.source == str(path)


def test_environment_overrides(tmp_path, monkeypatch):
    path = tmp_path / "run.toml"
    path.write_text("[seeds]\nbase = 11\n")
    monkeypatch.setenv(CONFIG_ENV, str(path))
    monkeypatch.setenv(SEED_ENV, "99")
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "elsewhere"))
    config = load_config()
    assert config.seed == 99
    assert config.out_dir == tmp_path / "elsewhere"

    monkeypatch.setenv(SEED_ENV, "many")
    with pytest.raises(ConfigError, match=SEED_ENV):
        load_config()


def test_explicit_overrides():
    config = PipelineConfig().with_overrides(out_dir="x", seed=3, input_path="trips.csv")
    assert (config.out_dir, config.seed, config.paths.input) == (Path("x"), 3, "trips.csv")
    with pytest.raises(ConfigError):
        PipelineConfig().with_overrides(seed=-1)


@pytest.mark.parametrize(
    "data, message",
    [
        ({"plotting": {}}, "unknown config section"),
        ({"clustering": {"k": 3}}, "unknown key"),
        ({"clustering": {"c": "three"}}, "must be a number"),
        ({"clustering": {"c": 2.5}}, "must be an integer"),
        ({"clustering": {"c": 1}}, "c must be >= 2"),
        ({"day_similarity": {"train": 1}}, "true or false"),
        ({"paths": {"input": 5}}, "must be a string"),
        ({"detection": {"train_from": "02/02/2015"}}, "ISO date"),
        ({"hotspots": "dense"}, "must be a table"),
        ({"binning": {"chunk_rows": 0}}, "chunk_rows must be >= 1"),
    ],
)
def test_invalid_values_are_rejected(data, message):
    with pytest.raises(ConfigError, match=message):
        config_from_dict(data)


def test_missing_or_broken_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("[paths\n")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(broken)


def test_detection_ranges():
    days = [date(2015, 2, d) for d in range(1, 11)]
    train, evaluation = DetectionConfig(train_fraction=0.6).ranges(days)
    assert train == (date(2015, 2, 1), date(2015, 2, 6))
    assert evaluation == (date(2015, 2, 7), date(2015, 2, 10))
    fixed = DetectionConfig(train_from="2015-02-02", train_to="2015-02-05").ranges(days)
    assert fixed[0] == (date(2015, 2, 2), date(2015, 2, 5))
    with pytest.raises(ConfigError):
        DetectionConfig().ranges(days[:1])


def test_sample_config_loads():
    sample = Path(__file__).resolve().parent.parent / "configs" / "sample.toml"
    config = load_config(sample)
    assert config.synthetic.anomalies
    assert config.detection.train_from == "2015-02-02"
    assert config.training.generations == config.day_similarity.generations == 12
