import math

import numpy as np
import pytest

from qwsc.references.classical import binomial_distribution
from qwsc.spectral.statistics import (
    fit_fourier_large_k,
    fit_fourier_small_k,
    fit_spectrum_slice,
    fourier_beats,
    fourier_envelope,
    fourier_peak_count,
    magnitude_envelope,
)
from qwsc.spectral.transform import Spectrum, Spectrum2D, dft, dft2d, grid_indices, k_grid, spectrum_slice
from qwsc.walks.distribution import Distribution
from qwsc.walks.walk1d import evolve
from qwsc.walks.walk2d import aqw_walk, tensor_walk


def test_grid_indices():
    assert grid_indices(5).tolist() == [-2, -1, 0, 1, 2]
    assert grid_indices(4).tolist() == [-1, 0, 1, 2]
    assert k_grid(4)[-1] == pytest.approx(math.pi)


def test_dft_of_binomial_n2():
    s = dft(binomial_distribution(2))
    # F(k) = 1/2 + cos(k)/2、k = 0, ±2π/3
    assert s.k_grid.size == 3
    assert s.value_at(0.0) == pytest.approx(1.0)
    assert s.value_at(2.0 * math.pi / 3.0) == pytest.approx(0.25)
    assert s.value_at(-2.0 * math.pi / 3.0) == pytest.approx(0.25)


def test_dft_matches_direct_cosine_sum():
    d = evolve(50, [50])[50]
    s = dft(d)
    direct = np.array([np.sum(d.probs * np.cos(k * d.positions / 2.0)) for k in s.k_grid])
    assert np.allclose(s.components, direct, atol=1e-12)
    assert s.value_at(0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [200, 201])
def test_parseval_for_both_parities(n):
    d = evolve(n, [n])[n]
    s = dft(d)
    m_size = d.n_steps + 1
    assert s.k_grid.size == m_size
    assert math.fsum(s.components**2) == pytest.approx(m_size * math.fsum(d.probs**2), rel=1e-10)


def test_spectrum_decays_toward_k_pi():
    s = dft(evolve(400, [400])[400])
    near_pi = np.abs(s.components[np.abs(s.k_grid) > 0.95 * math.pi])
    near_zero = np.abs(s.components[(np.abs(s.k_grid) > 0.0) & (np.abs(s.k_grid) < 0.05 * math.pi)])
    assert near_pi.max() < 0.5 * near_zero.max()


def test_dft_rejects_unnormalized():
    d = Distribution(2, np.array([-2, 0, 2]), np.array([0.5, 0.5, 0.5]), "even", "classical-1d")
    with pytest.raises(ValueError):
        dft(d)


def test_rescaled_axis():
    s = dft(evolve(100, [100])[100])
    assert s.rescaled.max() == pytest.approx(100 * 50 / 101)


def test_tensor_spectrum_factorizes():
    n = 30
    one = dft(evolve(n, [n])[n])
    two = dft2d(tensor_walk(n))
    assert two.components.shape == (n + 1, n + 1)
    assert np.allclose(two.components, np.outer(one.components, one.components), atol=1e-10)
    b = spectrum_slice(two, "B")
    assert np.allclose(b.components, one.components**2, atol=1e-10)
    a = spectrum_slice(two, "A")
    assert np.allclose(a.components, one.components, atol=1e-10)
    with pytest.raises(ValueError):
        spectrum_slice(two, "D")


def test_aqw_spectrum_has_unit_origin():
    two = dft2d(aqw_walk(20))
    i0 = int(np.argmin(np.abs(two.kx)))
    assert two.components[i0, i0] == pytest.approx(1.0, abs=1e-12)


def test_spectrum_csv(tmp_path):
    s = dft(binomial_distribution(4))
    path = tmp_path / "s.csv"
    s.to_csv(path, ("qwalk-scope 0.1.0",))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# qwalk-scope 0.1.0"
    assert lines[2] == "k,F"
    assert len(lines) == 3 + 5
    two = Spectrum2D(4, s.k_grid, s.k_grid, np.outer(s.components, s.components))
    sidecar = two.to_csv(tmp_path / "s2.csv")
    assert '"grid_size": 5' in sidecar.read_text(encoding="utf-8")


def test_fourier_peak_count_periodic():
    k = k_grid(12)
    s = Spectrum(11, k, np.cos(3 * k))
    # cos 3k は (-π, π] に3つの極大（k = 0, ±2π/3）
    assert fourier_peak_count(s, half=False) == 3
    assert fourier_peak_count(s) == 1


def test_fourier_peak_count_is_mirror_symmetric():
    s = dft(evolve(1000, [1000])[1000])
    half = fourier_peak_count(s)
    # k = 0 以外の極大は ±k の対で現れ、±k_max は周期境界でつながる
    assert 2 * half <= fourier_peak_count(s, half=False) <= 2 * half + 2


def synthetic_spectra(model):
    spectra = []
    for n in (1000, 4000, 16000):
        m_size = n + 1
        k = k_grid(m_size)
        u = np.abs(k) / math.pi
        env = model(u) / math.sqrt(n)
        # 4点に1点だけ包絡値を持つ振動列
        mask = (grid_indices(m_size) % 4) == 0
        spectra.append(Spectrum(n, k, np.where(mask, env, 0.0)))
    return spectra


def test_fit_fourier_small_k_synthetic():
    spectra = synthetic_spectra(lambda u: 0.3 * np.power(np.maximum(u, 1e-9), -0.5))
    fit = fit_fourier_small_k(spectra)
    assert fit.params["c"] == pytest.approx(0.5, abs=1e-6)
    assert fit.params["A"] == pytest.approx(0.3, rel=1e-6)
    assert fit.params["amplitude_exponent"] == pytest.approx(-0.5, abs=1e-6)


def test_fit_fourier_large_k_synthetic():
    spectra = synthetic_spectra(lambda u: 0.2 * (1.0 - np.minimum(u, 1.0)))
    fit = fit_fourier_large_k(spectra)
    assert fit.params["c"] == pytest.approx(1.0, abs=1e-4)
    assert fit.params["A"] == pytest.approx(0.2, rel=1e-4)
    assert abs(fit.params["P0"]) < 1e-5


def test_fit_fourier_large_k_with_offset():
    spectra = synthetic_spectra(lambda u: 0.05 + 0.3 * (1.0 - np.minimum(u, 1.0)) ** 1.5)
    fit = fit_fourier_large_k(spectra)
    assert fit.params["P0"] == pytest.approx(0.05, rel=1e-3)
    assert fit.params["c"] == pytest.approx(1.5, abs=1e-3)
    assert fit.params["A"] == pytest.approx(0.3, rel=1e-3)
    assert fit.params["amplitude_exponent"] == pytest.approx(-0.5, abs=1e-3)



def test_fourier_envelope_window():
    s = dft(evolve(400, [400])[400])
    env = fourier_envelope(s, (0.1, 1.0))
    assert np.all((env.positions >= 0.1) & (env.positions <= 1.0))


def test_fourier_beats_report():
    s = dft(evolve(1000, [1000])[1000])
    report = fourier_beats(s)
    for node in report.nodes:
        assert 250 <= node <= 500


def test_aqw_slice_a_matches_marginal_cosine_sum():
    s = spectrum_slice(dft2d(aqw_walk(6)), "A")
    k = s.k_grid
    # x 周辺分布 [504, 496, 568, 960, 568, 496, 504] / 4096 の余弦和
    expected = (960 + 1136 * np.cos(k) + 992 * np.cos(2 * k) + 1008 * np.cos(3 * k)) / 4096
    assert np.allclose(s.components, expected, atol=1e-12)
    assert s.components.min() > 0.0
    # 格子外の k = π では負になる
    assert (960 - 1136 + 992 - 1008) / 4096 < 0.0


def slice_spectrum(n, model):
    k = k_grid(n + 1)
    mask = (grid_indices(n + 1) % 3) == 0
    return Spectrum(n, k, np.where(mask, model(np.abs(k) / math.pi), 0.0), label="A")


def test_fit_spectrum_slice_small_k():
    s = slice_spectrum(2000, lambda u: 0.01 + 0.02 * np.power(np.maximum(u, 1e-9), -1.0))
    fit = fit_spectrum_slice(s, "small")
    assert fit.model == "fourier-small-k"
    assert fit.params["c"] == pytest.approx(1.0, abs=1e-3)
    assert fit.params["P0"] == pytest.approx(0.01, rel=1e-3)
    assert fit.params["A"] == pytest.approx(0.02 * math.sqrt(2000), rel=1e-3)


def test_fit_spectrum_slice_large_k_uses_magnitude():
    # 符号が交互に変わっても |F| の包絡線を当てはめる
    n = 2000
    k = k_grid(n + 1)
    idx = grid_indices(n + 1)
    env = 0.004 + 0.05 * (1.0 - np.abs(k) / math.pi) ** 2
    values = np.where(idx % 3 == 0, env * np.where(idx % 2 == 0, 1.0, -1.0), 0.0)
    s = Spectrum(n, k, values, label="B")
    env_points = magnitude_envelope(s, (0.4 * math.pi, math.pi))
    assert np.all(env_points.values > 0.0)
    fit = fit_spectrum_slice(s, "large")
    assert fit.params["c"] == pytest.approx(2.0, abs=1e-3)
    assert fit.params["P0"] == pytest.approx(0.004, rel=1e-3)


def test_fit_spectrum_slice_rejects_unknown_region():
    s = slice_spectrum(200, lambda u: 1.0 - u)
    with pytest.raises(ValueError):
        fit_spectrum_slice(s, "middle")


# --- 実際のウォーク（時間がかかる）
@pytest.fixture(scope="module")
def walk_spectra():
    runs = evolve(4000, [1000, 2000, 4000])
    return {n: dft(d) for n, d in runs.items()}


@pytest.mark.slow
def test_fourier_peak_counts_follow_n_over_12(walk_spectra):
    for n, expected_total in ((1000, 167), (4000, 667)):
        s = walk_spectra[n]
        assert fourier_peak_count(s) / n == pytest.approx(1.0 / 12.0, abs=0.01)
        assert fourier_peak_count(s, half=False) == pytest.approx(expected_total, rel=0.03)


@pytest.mark.slow
def test_last_fourier_beat(walk_spectra):
    for n, width, peaks in ((1000, 45, 9), (4000, 87, 18)):
        last = fourier_beats(walk_spectra[n]).segments[-1]
        assert last.hi - last.lo == pytest.approx(width, rel=0.2)
        assert abs(last.peak_count - peaks) <= 2


@pytest.mark.slow
def test_fourier_envelope_exponents(walk_spectra):
    spectra = list(walk_spectra.values())
    assert fit_fourier_small_k(spectra).params["c"] == pytest.approx(0.5, abs=0.15)
    assert fit_fourier_large_k(spectra).params["c"] == pytest.approx(1.0, abs=0.15)
