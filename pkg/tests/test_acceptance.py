"""Desk-scale acceptance runs over synthetic data (marked slow)."""

from datetime import datetime, timedelta

import numpy as np
import polars as pl
import pytest

from loaders import ingest_csv
from stigpattern.clustering import evaluate_detection
from stigpattern.config import BinningConfig, HotspotConfig, PipelineConfig, config_from_dict
from stigpattern.pipeline import StigPatternSystem
from stigpattern.synthetic import SyntheticSpec, anomaly_dates, generate_synthetic, read_ground_truth

pytestmark = pytest.mark.slow


def test_hotspot_recovery_ignores_single_slot_cluster(tmp_path):
    # shipped grid and hotspot settings, only the synthetic city is described here
    config = config_from_dict({
        "paths": {"out_dir": str(tmp_path / "out")},
        "seeds": {"base": 2},
        "synthetic": {
            "n_days": 7,
            "peak_trips": 10.0,
            "spread_ft": 300.0,
            "background_trips": 0.5,
            "transients": [{"lon": -73.95, "lat": 40.85, "slot": "NIGHT", "trips": 6.0}],
        },
    })
    assert config.binning == BinningConfig() and config.hotspots == HotspotConfig()
    spec = SyntheticSpec.from_config(config.synthetic, config.study_area)
    result = generate_synthetic(spec, config.seed, tmp_path / "data")

    system = StigPatternSystem(config)
    system.ingest(str(result.csv_path))
    hotspots = system.find_hotspots()
    assert len(hotspots) == 2
    for spot in spec.hotspots:
        ix, iy = system.grid.cell_index(*system.area.project(spot.lon, spot.lat))
        assert sum(h.contains_cell(int(ix), int(iy)) for h in hotspots) == 1
    tx, ty = system.grid.cell_index(*system.area.project(-73.95, 40.85))
    assert not any(h.contains_cell(int(tx), int(ty)) for h in hotspots)


def test_ingestion_throughput(tmp_path):
    area = StigPatternSystem(PipelineConfig()).area
    n = 100_000
    rng = np.random.default_rng(0)
    start = datetime(2015, 2, 2)
    pickup = [start + timedelta(seconds=int(s)) for s in rng.integers(0, 28 * 86_400, n)]
    trips = pl.DataFrame({
        "tpep_pickup_datetime": pickup,
        "tpep_dropoff_datetime": [t + timedelta(minutes=10) for t in pickup],
        "passenger_count": rng.integers(1, 5, n),
        "pickup_longitude": rng.uniform(area.lon_min, area.lon_max, n),
        "pickup_latitude": rng.uniform(area.lat_min, area.lat_max, n),
        "dropoff_longitude": rng.uniform(area.lon_min, area.lon_max, n),
        "dropoff_latitude": rng.uniform(area.lat_min, area.lat_max, n),
    })
    path = tmp_path / "yellow_tripdata_sample.csv"
    trips.write_csv(path, datetime_format="%Y-%m-%d %H:%M:%S")

    events, stats = ingest_csv(path, area)
    assert stats.rows_total == n
    assert stats.rows_dropped == 0
    assert events.height == 2 * n
    assert stats.rows_per_second >= 50_000


def test_ten_week_calendar_flags_injected_days(tmp_path):
    anomalies = [("2015-03-18", "Leisure"), ("2015-03-26", "Entertainment"),
                 ("2015-04-04", "Working"), ("2015-04-07", "Leisure")]
    config = config_from_dict({
        "paths": {"out_dir": str(tmp_path / "out")},
        "seeds": {"base": 7},
        "detection": {"train_from": "2015-02-02", "train_to": "2015-03-15",
                      "eval_from": "2015-03-16", "eval_to": "2015-04-12", "margin": 0.1},
        "synthetic": {
            "n_days": 70,
            "peak_trips": 20.0,
            "spread_ft": 200.0,
            "noise_amp": 0.05,
            "background_trips": 0.5,
            "anomalies": [{"date": d, "class": c} for d, c in anomalies],
        },
    })
    spec = SyntheticSpec.from_config(config.synthetic, config.study_area)
    result = generate_synthetic(spec, config.seed, tmp_path / "data")
    truth = anomaly_dates(read_ground_truth(result.manifest_path))
    assert [d.isoformat() for d in truth] == [d for d, _ in anomalies]

    run = StigPatternSystem(config).run(str(result.csv_path))
    assert len(run.levels) == 70
    assert len(run.reports) == 28
    score = evaluate_detection(run.flagged, truth)
    assert score.recall >= 0.9
    assert score.false_positives <= 1
