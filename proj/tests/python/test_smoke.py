"""Smoke tests for the cvkit Python module.

Run from the repository root after building:
    PYTHONPATH=build/bindings python3 -m pytest tests/python
"""

import pytest

cvkit = pytest.importorskip("cvkit")

CSV = (
    "vehicle_id,timestamp,latitude,longitude,speed\n"
    "a,100,42.300000,-83.700000,1\n"
    "b,100,42.301000,-83.700000,2\n"
    "c,100,42.302000,-83.700000,3\n"
    "d,100,42.350000,-83.530000,4\n"
)


def test_parse_and_group():
    records = cvkit.parse_bsm_csv(CSV)
    assert len(records) == 4
    assert records[0].vehicle_id == "a"
    frames = cvkit.group_into_timeframes(records)
    assert len(frames) == 1
    assert frames[0].timestamp == 100
    assert len(frames[0]) == 4


def test_parse_errors_surface_as_cvkit_error():
    with pytest.raises(cvkit.Error):
        cvkit.parse_bsm_csv("vehicle_id,timestamp,latitude,longitude,speed\nv1,1,95.0,0,0\n")
    with pytest.raises(cvkit.Error):
        cvkit.parse_bsm_csv("not,a,header\n")


def test_partitioning_routes_agree():
    frames = cvkit.group_into_timeframes(cvkit.parse_bsm_csv(CSV))
    d = cvkit.distance_matrix(frames[0])
    closed, trace = cvkit.multihop_closure(cvkit.connectivity_from_distances(d, 1000.0))
    via_closure = cvkit.extract_partitions(closed)
    via_union_find = cvkit.union_find_partitions(d, 1000.0)
    assert via_closure.labels == via_union_find.labels == [0, 0, 0, 1]
    assert via_closure.partition_count == 2
    assert trace.converged
    assert cvkit.partition_timeframe(frames[0], 1000.0).labels == [0, 0, 0, 1]


def test_haversine_and_area():
    a = cvkit.GeoPoint(42.356186, -83.522030)
    b = cvkit.GeoPoint(42.356186, -83.816270)
    d = cvkit.haversine_distance(a, b)
    assert d == pytest.approx(24177.63, rel=1e-4)
    assert cvkit.haversine_distance(b, a) == pytest.approx(d)
    assert cvkit.rectangle_area_km2(cvkit.ann_arbor_rect()) == pytest.approx(348.16, rel=0.01)


def test_generate_dataset_deterministic_roundtrip():
    cfg = cvkit.GenConfig()
    cfg.n_vehicles = 20
    cfg.n_timeframes = 3
    cfg.seed = 11
    first = cvkit.generate_dataset(cfg)
    assert first == cvkit.generate_dataset(cfg)
    frames = cvkit.group_into_timeframes(cvkit.parse_bsm_csv(first))
    assert len(frames) == 3
    rect = cvkit.ann_arbor_rect()
    for frame in frames:
        assert len(frame) == 20
        for record in frame.vehicles:
            assert rect.contains(cvkit.GeoPoint(record.latitude, record.longitude))


def test_spat_codec_roundtrip():
    spat = cvkit.spat
    state = spat.IntersectionState()
    phases = state.phases
    phases[1] = spat.PhaseColor.GREEN
    phases[5] = spat.PhaseColor.GREEN
    state.phases = phases

    packet = spat.encode_spat_packet(state, pedestrian=False)
    assert len(packet) == spat.FRAME_BYTES
    frame = spat.parse_spat_packet(packet)
    assert frame.green_bits == 0x22
    assert spat.interpret_state(frame) == state
    assert spat.consistency_check(frame) == []
    assert spat.state_letters(state) == "RGRRRGRR"

    ped = spat.encode_spat_packet(state, pedestrian=True)
    assert len(ped) == spat.FRAME_BYTES_PEDESTRIAN
    assert spat.parse_spat_packet(ped).has_pedestrian_bytes

    with pytest.raises(cvkit.Error):
        spat.parse_spat_packet(b"\x00" * 243)


def test_loglog_slope():
    points = [(float(n), float(n * n)) for n in (10, 20, 40, 80)]
    assert cvkit.fit_loglog_slope(points) == pytest.approx(2.0, abs=1e-9)


def test_density_sweep_small():
    samples = cvkit.partition_density_sweep([1, 5], trials=10, range_m=1000.0, seed=3)
    assert [s.n for s in samples] == [1, 5]
    assert samples[0].mean_partitions == 1.0
    assert 1.0 <= samples[1].mean_partitions <= 5.0
