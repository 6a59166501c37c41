from datetime import datetime

import numpy as np
import pytest

from loaders import ArchetypeCSVLoader, LabeledWindowLoader, TLCLoader, bin_csv, ingest_csv, ingest_many
from stigpattern.errors import IngestError
from stigpattern.hotspots import DROPOFF, PICKUP, BinConfig, StudyArea, bin_events

HEADER = ("VendorID,tpep_pickup_datetime,tpep_dropoff_datetime,passenger_count,trip_distance,"
          "pickup_longitude,pickup_latitude,RateCodeID,store_and_fwd_flag,dropoff_longitude,dropoff_latitude")

ROWS = [
    "2,2015-02-02 08:00:00,2015-02-02 08:12:00,2,1.5,-73.98,40.75,1,N,-73.96,40.77",
    "1,2015-02-02 09:30:00,2015-02-02 09:41:00,1,2.0,-73.95,40.80,1,N,-73.99,40.74",
    "1,2015-02-02 10:00:00,2015-02-02 10:20:00,3,0.9,-73.97,40.76,1,N,-73.97,40.78",
]


@pytest.fixture
def area() -> StudyArea:
    return StudyArea(-74.03, -73.90, 40.69, 40.89)


@pytest.fixture
def trips_csv(tmp_path):
    def write(rows, header=HEADER, name="trips.csv"):
        path = tmp_path / name
        path.write_text("\n".join([header, *rows]) + "\n")
        return path
    return write


def test_each_row_gives_pickup_and_dropoff(area, trips_csv):
    events, stats = ingest_csv(trips_csv(ROWS[:1]), area)
    assert events.height == 2
    assert sorted(events["kind"].to_list()) == sorted([PICKUP, DROPOFF])
    assert events["passengers"].to_list() == [2, 2]
    pickup = events.filter(events["kind"] == PICKUP).row(0, named=True)
    assert pickup["timestamp"] == datetime(2015, 2, 2, 8, 0)
    x, y = area.project(-73.98, 40.75)
    assert pickup["x"] == pytest.approx(float(x))
    assert pickup["y"] == pytest.approx(float(y))
    assert (stats.rows_total, stats.rows_dropped, stats.events_emitted) == (1, 0, 2)


def test_rows_with_missing_fields_are_dropped(area, trips_csv):
    broken = "2,2015-02-02 08:00:00,2015-02-02 08:12:00,2,1.5,,40.75,1,N,-73.96,40.77"
    zero_passengers = "2,2015-02-02 08:00:00,2015-02-02 08:12:00,0,1.5,-73.98,40.75,1,N,-73.96,40.77"
    bad_time = "2,not a time,2015-02-02 08:12:00,1,1.5,-73.98,40.75,1,N,-73.96,40.77"
    events, stats = ingest_csv(trips_csv([ROWS[0], broken, zero_passengers, bad_time]), area)
    assert events.height == 2
    assert stats.rows_total == 4
    assert stats.rows_dropped == 3


def test_unknown_header_is_rejected(area, trips_csv):
    path = trips_csv(ROWS, header=HEADER.replace("pickup_latitude", "pickup_lat"))
    with pytest.raises(IngestError, match="pickup_latitude"):
        ingest_csv(path, area)


def test_missing_and_empty_files(area, tmp_path):
    with pytest.raises(IngestError, match="not found"):
        ingest_csv(tmp_path / "absent.csv", area)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(IngestError) as info:
        ingest_csv(empty, area)
    assert info.value.row == 1


def test_chunks_are_bounded(area, trips_csv):
    loader = TLCLoader(area, chunk_rows=2)
    chunks = list(loader.load(trips_csv(ROWS)))
    assert [c.height for c in chunks] == [4, 2]
    assert loader.stats.rows_total == 3
    assert loader.stats.seconds >= 0
    with pytest.raises(ValueError):
        TLCLoader(area, chunk_rows=0)


def test_ingest_many_pools_files(area, trips_csv):
    first = trips_csv(ROWS[:2], name="jan.csv")
    second = trips_csv(ROWS[2:], name="feb.csv")
    events, stats = ingest_many([first, second], area)
    assert events.height == 6
    assert stats.rows_total == 3
    assert stats.events_emitted == 6


def test_bin_csv_matches_binning_the_whole_file(area, trips_csv):
    first = trips_csv(ROWS[:2], name="jan.csv")
    second = trips_csv([*ROWS[2:], "1,2015-02-03 07:00:00,2015-02-03 07:05:00,1,1.0,-73.98,40.75,1,N,-73.98,40.75"],
                       name="feb.csv")
    config = BinConfig(area.grid(50, 50))
    binned, stats = bin_csv([first, second], config, area, chunk_rows=1)
    events, _ = ingest_many([first, second], area)
    assert binned.frame.equals(bin_events(events, config).frame)
    assert binned.frame["value"].sum() == 14.0
    assert (stats.rows_total, stats.events_emitted) == (4, 8)

    single, single_stats = bin_csv(first, config, area)
    assert single_stats.rows_total == 2
    assert single.days == (datetime(2015, 2, 2).date(),)


def test_archetype_csv_loader(tmp_path):
    path = tmp_path / "archetypes.csv"
    values = np.linspace(0.2, 0.6, 72)
    path.write_text("flow\n" + "\n".join(f"{v:.6f}" for v in values) + "\n")
    templates = ArchetypeCSVLoader().load(path)
    assert list(templates) == ["Flow"]
    np.testing.assert_allclose(templates["Flow"], values, atol=1e-6)

    path.write_text("Nap\n0.1\n0.2\n")
    with pytest.raises(IngestError, match="unknown archetype"):
        ArchetypeCSVLoader().load(path)
    path.write_text("Asleep\n0.1\n1.2\n")
    with pytest.raises(IngestError, match=r"\[0, 1\]"):
        ArchetypeCSVLoader().load(path)


def test_labeled_window_loader(tmp_path):
    path = tmp_path / "windows.csv"
    path.write_text("target,s0,s1,s2\n1,0.1,0.2,0.3\n0,0.9,0.8,0.7\n")
    windows = LabeledWindowLoader().load(path)
    assert [w.target for w in windows] == [1.0, 0.0]
    np.testing.assert_allclose(windows[0].window, [0.1, 0.2, 0.3])

    path.write_text("target,s0,s1,s2\n1,0.1,0.2,0.3\n0.5,0.9,0.8,0.7\n")
    with pytest.raises(IngestError) as info:
        LabeledWindowLoader().load(path)
    assert info.value.row == 3
    path.write_text("label,s0,s1\n1,0.1,0.2\n")
    with pytest.raises(IngestError, match="target"):
        LabeledWindowLoader().load(path)
