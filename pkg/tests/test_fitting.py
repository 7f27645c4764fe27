import math

import numpy as np
import pytest

from qwsc.analysis.fitting import (
    fit_envelope_center,
    fit_envelope_outer,
    fit_gaussian,
    fit_offset_inverse_power,
    fit_tail,
    power_law_fit,
)
from qwsc.analysis.peaks import extract_envelope
from qwsc.analysis.reports import EnvelopeSeries, FitResult
from qwsc.walks.distribution import Distribution
from qwsc.walks.walk1d import evolve


def test_power_law_fit_exact():
    fit = power_law_fit([(x, 3.0 * x**0.5) for x in (10.0, 100.0, 1000.0, 10000.0)])
    assert fit.model == "power-law"
    assert fit.params["exponent"] == pytest.approx(0.5)
    assert fit.params["prefactor"] == pytest.approx(3.0)
    assert fit.residual < 1e-12


def test_power_law_fit_preconditions():
    with pytest.raises(ValueError):
        power_law_fit([(1.0, 1.0), (2.0, 2.0)])
    with pytest.raises(ValueError):
        power_law_fit([(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)])


def test_outer_envelope_recovers_exponent():
    n = 10000
    b = n / math.sqrt(2)
    p0 = -1.884 / n
    x = np.arange(5000.0, 6900.0, 20.0)
    values = p0 + 0.4 * (b - x) ** -0.5
    fit = fit_envelope_outer(EnvelopeSeries("upper", x, values), n)
    assert fit.params["c"] == pytest.approx(0.5, abs=1e-9)
    assert fit.params["a"] == pytest.approx(0.4, rel=1e-9)
    assert fit.params["A"] == pytest.approx(0.4 * math.sqrt(n), rel=1e-9)


def test_center_envelope_recovers_offset_and_exponent():
    n = 1000
    x = np.arange(10.0, 210.0, 10.0)
    values = 1e-3 + 1e-8 * x**2
    fit = fit_envelope_center(EnvelopeSeries("upper", x, values), n)
    assert fit.model == "central-quadratic"
    assert fit.params["c"] == pytest.approx(2.0, abs=1e-3)
    assert fit.params["P0"] == pytest.approx(1e-3, rel=1e-4)


def test_center_envelope_needs_points():
    e = EnvelopeSeries("upper", np.array([-10.0, 0.0, 10.0]), np.array([1.0, 1.0, 2.0]))
    with pytest.raises(ValueError):
        fit_envelope_center(e, 100)


def test_tail_recovers_decay_constant():
    n = 1000
    b = n / math.sqrt(2)
    positions = np.arange(-n, n + 1, 2)
    s = np.clip(positions - b, 0.0, None) ** 1.5 / math.sqrt(n)
    probs = np.where(positions > b, 0.01 * np.exp(-3.2 * s), 1e-4)
    d = Distribution(n, positions, probs, "even", "quantum-1d")
    fit = fit_tail(d, n)
    assert fit.params["d"] == pytest.approx(3.2, rel=1e-9)
    assert fit.params["a"] == pytest.approx(0.01, rel=1e-9)


def test_gaussian_fit():
    x = np.arange(-100, 101, 2).astype(float)
    p = 0.05 * np.exp(-(x**2) / (2.0 * 7.0**2))
    fit = fit_gaussian(x, p, spacing=2.0)
    assert fit.params["sigma"] == pytest.approx(7.0, rel=1e-9)
    assert fit.params["A"] == pytest.approx(0.025, rel=1e-9)


def test_offset_inverse_power():
    x = np.linspace(0.0, 90.0, 40)
    values = 2e-4 + 0.3 * (100.0 - x) ** -1.0
    p0, a, c = fit_offset_inverse_power(x, values, 100.0)
    assert c == pytest.approx(1.0, abs=1e-3)
    assert a == pytest.approx(0.3, rel=1e-2)
    assert p0 == pytest.approx(2e-4, rel=1e-2)


def test_fit_result_rejects_unknown_model():
    with pytest.raises(ValueError):
        FitResult(model="spline", params={}, window=(0.0, 1.0), residual=0.0)
    nan_fit = FitResult(model="power-law", params={"exponent": math.nan}, window=(0.0, 1.0), residual=0.0)
    assert nan_fit.to_dict()["params"]["exponent"] is None


def test_center_offset_is_interior_not_scan_bound():
    # 相対残差の最小点は探索格子の下端ではなく真の P0 に来る
    n = 10000
    x = np.arange(20.0, 2000.0, 20.0)
    values = 0.615 / n + 1.0 / n**3 * x**2
    fit = fit_envelope_center(EnvelopeSeries("upper", x, values), n)
    span = values.max() - values.min()
    assert fit.params["P0"] > values.min() - span
    assert fit.params["B"] == pytest.approx(0.615, rel=1e-4)
    assert fit.params["A"] == pytest.approx(1.0, rel=1e-3)
    assert fit.params["c"] == pytest.approx(2.0, abs=1e-3)
    assert fit.residual < 1e-6


def test_center_envelope_tolerates_noise():
    rng = np.random.default_rng(7)
    n = 1000
    x = np.arange(2.0, 200.0, 2.0)
    values = (0.6 / n + 1e-8 * x**2) * (1.0 + 0.003 * rng.standard_normal(x.size))
    fit = fit_envelope_center(EnvelopeSeries("upper", x, values), n)
    assert fit.params["c"] == pytest.approx(2.0, abs=0.2)
    assert fit.params["B"] == pytest.approx(0.6, rel=0.05)


def test_offset_inverse_power_negative_offset():
    n = 4000
    b = n / math.sqrt(2)
    x = np.arange(0.0, 0.95 * b, 10.0)
    values = -1.0 / n + 2.0 / math.sqrt(n) * (b - x) ** -0.5
    p0, a, c = fit_offset_inverse_power(x, values, b)
    assert c == pytest.approx(0.5, abs=1e-3)
    assert p0 * n == pytest.approx(-1.0, rel=1e-2)
    assert a * math.sqrt(n) == pytest.approx(2.0, rel=1e-2)


def test_offset_fit_rejects_flat_values():
    e = EnvelopeSeries("upper", np.arange(1.0, 6.0), np.full(5, 0.1))
    with pytest.raises(ValueError):
        fit_envelope_center(e, 100)


@pytest.mark.slow
def test_envelope_exponents_of_real_walk():
    n = 10000
    d = evolve(n, [n], threads=4)[n]
    outer = fit_envelope_outer(extract_envelope(d, "upper", (5000, 6900)), n)
    center = fit_envelope_center(extract_envelope(d, "upper", (0, 2000)), n)
    assert outer.params["c"] == pytest.approx(0.5, abs=0.1)
    assert center.params["c"] == pytest.approx(2.0, abs=0.2)
    assert center.params["B"] == pytest.approx(0.615, rel=0.1)
