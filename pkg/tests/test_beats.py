import numpy as np
import pytest

from qwsc.analysis.beats import (
    NODE_THRESHOLD,
    beat_nodes,
    detect_beats,
    detect_beats_series,
    envelope_gap,
)
from qwsc.analysis.reports import BeatReport, BeatSegment
from qwsc.walks.walk1d import evolve


def beating_signal():
    # 節 x = 100, 300, ... で上下の包絡線 3 ± 2|cos(πx/200)| が接する
    x = np.arange(0, 1000, dtype=float)
    return x, 3.0 + 2.0 * np.cos(np.pi * x / 200.0) * np.cos(2.0 * np.pi * x / 8.0)


def test_beat_nodes_take_minimum_of_each_run():
    gap = np.array([0.9, 0.9, 0.1, 0.2, 0.9, 0.9, 0.05, 0.9])
    assert beat_nodes(gap) == [2, 6]
    assert beat_nodes(np.array([])) == []


def test_beat_nodes_skip_runs_at_ends():
    assert beat_nodes(np.array([0.1, 0.9, 0.2, 0.9])) == [2]
    assert beat_nodes(np.array([0.9, 0.2, 0.1])) == []


def test_envelope_gap_vanishes_at_nodes():
    x, v = beating_signal()
    xs, gap = envelope_gap(x, v, (0, 999), 200.0)
    assert gap.max() == pytest.approx(1.0)
    assert gap[np.searchsorted(xs, 300.0)] < NODE_THRESHOLD
    assert gap[np.searchsorted(xs, 400.0)] > 0.8


def test_detect_beats_on_synthetic_signal():
    x, v = beating_signal()
    report = detect_beats_series(x, v, (0, 999), reference_width=200.0)
    assert len(report.nodes) == 5
    assert len(report.segments) == 4
    for node, expected in zip(report.nodes, (100, 300, 500, 700, 900)):
        assert node == pytest.approx(expected, abs=8.0)
    for seg in report.segments:
        assert seg.width == pytest.approx(200.0, abs=16.0)
        assert 23 <= seg.peak_count <= 27
    seg = report.containing(400.0)
    assert seg is not None and seg.lo < 400.0 < seg.hi


def test_nodes_stable_under_threshold_change():
    x, v = beating_signal()
    counts = [
        len(detect_beats_series(x, v, (0, 999), reference_width=200.0, threshold=t).segments)
        for t in (0.9 * NODE_THRESHOLD, NODE_THRESHOLD, 1.1 * NODE_THRESHOLD)
    ]
    assert counts == [4, 4, 4]


def test_detect_beats_small_window_raises():
    x, v = beating_signal()
    with pytest.raises(ValueError):
        detect_beats_series(x, v, (10, 12), reference_width=200.0)
    with pytest.raises(ValueError):
        detect_beats_series(x, v, (0, 999), reference_width=0.0)


def test_beat_report_rejects_overlap():
    with pytest.raises(ValueError):
        BeatReport(segments=(BeatSegment(0.0, 10.0, 2), BeatSegment(5.0, 15.0, 2)))


def test_detect_beats_on_walk_returns_disjoint_segments():
    d = evolve(1000, [1000])[1000]
    report = detect_beats(d, (530, 630))
    for a, b in zip(report.segments[:-1], report.segments[1:]):
        assert a.hi <= b.lo
    assert report.to_dict()["nodes"] == list(report.nodes)
    assert all(530 <= x <= 630 for x in report.nodes)


@pytest.mark.slow
def test_last_real_space_beat_at_n1000():
    d = evolve(1000, [1000])[1000]
    for threshold in (0.9 * NODE_THRESHOLD, NODE_THRESHOLD, 1.1 * NODE_THRESHOLD):
        seg = detect_beats(d, (530, 630), threshold=threshold).containing(575.0)
        assert seg is not None
        assert seg.lo == pytest.approx(546, abs=4)
        assert seg.hi == pytest.approx(604, abs=4)
        assert seg.width == pytest.approx(58, abs=4)
        assert seg.peak_count == pytest.approx(14, abs=1)


@pytest.mark.slow
def test_last_real_space_beat_at_n10000():
    d = evolve(10000, [10000], threads=4)[10000]
    seg = detect_beats(d, (5300, 6300)).containing(5800.0)
    assert seg is not None
    assert seg.width == pytest.approx(176, abs=10)
    assert seg.peak_count == pytest.approx(44, abs=2)
