import pytest

from qwsc.analysis.reports import FitResult
from qwsc.analysis.scaling import (
    extrapolate_ratio,
    peak_widths,
    reference_point_scaling,
    width_scalings,
)
from qwsc.walks.walk1d import evolve


def test_peak_widths_single_run():
    d = evolve(2000, [2000])[2000]
    widths = peak_widths(d)
    assert set(widths) == {"first_10", "last_10", "fwhm"}
    assert widths["first_10"] > 0
    assert 0 < widths["fwhm"] < widths["last_10"]


def test_peak_widths_needs_ten_peaks():
    with pytest.raises(ValueError):
        peak_widths(evolve(20, [20])[20])


def test_width_scalings_require_two_decades():
    runs = evolve(800, [200, 400, 600, 800])
    with pytest.raises(ValueError):
        width_scalings(runs)


def test_reference_point_scaling_structure():
    runs = evolve(1600, [400, 800, 1600])
    out = reference_point_scaling(runs)
    assert set(out) == {"origin", "quarter", "half", "ballistic", "tail", "x_max", "ballistic_ratio",
                        "ballistic_ratio_largest_n"}
    assert isinstance(out["x_max"], FitResult)
    assert out["origin"].params["exponent"] < 0
    assert out["x_max"].params["exponent"] < 0
    assert 0.0 < out["ballistic_ratio"] <= 1.0
    assert 0.0 < out["ballistic_ratio_largest_n"] <= 1.0
    with pytest.raises(ValueError):
        reference_point_scaling({400: runs[400], 800: runs[800]})


def test_extrapolate_ratio_removes_finite_n_drift():
    ns = [100, 1000, 10000, 100000]
    ratios = [0.44 + 2.0 * n ** (-1.0 / 3.0) for n in ns]
    assert extrapolate_ratio(ns, ratios) == pytest.approx(0.44, abs=1e-10)
    # 平均や最大 N の値はまだ収束していない
    assert sum(ratios) / len(ratios) > 0.6
    assert ratios[-1] > 0.48


def test_extrapolate_ratio_needs_two_points():
    with pytest.raises(ValueError):
        extrapolate_ratio([1000], [0.5])
    with pytest.raises(ValueError):
        extrapolate_ratio([100, 1000], [0.5])
