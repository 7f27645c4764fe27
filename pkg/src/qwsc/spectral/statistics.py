# src/qwsc/spectral/statistics.py
"""フーリエ成分のピーク数・包絡線フィット・ビート構造。"""

from collections.abc import Sequence
import logging
import math

import numpy as np

from qwsc.analysis.beats import NODE_THRESHOLD, REFERENCE_WIDTH_SCALE, detect_beats_series
from qwsc.analysis.fitting import fit_offset_power, power_law_fit
from qwsc.analysis.peaks import peak_edges, series_envelope
from qwsc.analysis.reports import BeatReport, EnvelopeSeries, FitResult
from qwsc.spectral.transform import Spectrum


logger = logging.getLogger(__name__)


# --- 定数
SMALL_K_MAX = 0.2           # 小さい k のフィット範囲 0 < k/π ≤ 0.2
LARGE_K_MIN = 0.4           # 大きい k のフィット範囲 0.4 ≤ k/π < 1
BEAT_WINDOW = (0.25, 0.5)   # ビート解析の窓（再スケール軸 Nk/2π を N で割った値）
MIN_FIT_POINTS = 3


def fourier_peak_count(s: Spectrum, half: bool = True) -> int:
    """周期格子上の F(k) の極大数。

    half=True なら k ∈ (0, π] の極大、False なら (-π, π] 全体の極大を数える。
    k = π 付近の隣は -π + dk として扱う。
    """
    values = s.components
    m_size = values.size
    if m_size < 3:
        return 0
    tiled = np.concatenate([values, values, values])
    left, _ = peak_edges(tiled)
    left = left[(left >= m_size) & (left < 2 * m_size)] - m_size
    if half:
        left = left[s.k_grid[left] > 0.0]
    return int(left.size)


def fourier_envelope(
    s: Spectrum,
    window: tuple[float, float],
    side: str = "upper",
) -> EnvelopeSeries:
    """k 窓 [lo, hi]（ラジアン）の包絡点。"""
    return series_envelope(s.k_grid, s.components, side, window)


def _pooled_points(
    spectra: Sequence[Spectrum],
    lo: float,
    hi: float,
) -> list[tuple[int, np.ndarray, np.ndarray]]:
    """各スペクトルの (N, k/π, F_e) を返す（正の包絡値のみ）。"""
    if not spectra:
        raise ValueError("スペクトルが1つも与えられていません。")
    out = []
    for s in spectra:
        env = fourier_envelope(s, (lo * math.pi, hi * math.pi))
        keep = (env.values > 0.0) & (env.positions > 0.0) & (env.positions < math.pi)
        dropped = len(env) - int(np.count_nonzero(keep))
        if dropped:
            logger.debug("N=%d: 非正の包絡点 %d 個を除外", s.n_steps, dropped)
        out.append((s.n_steps, env.positions[keep] / math.pi, env.values[keep]))
    if sum(u.size for _, u, _ in out) < MIN_FIT_POINTS:
        raise ValueError("フーリエ包絡線フィットの点が不足しています。")
    return out


def _amplitude_exponent(per_n: list[tuple[int, float]]) -> float:
    """N ごとの振幅 C_N から C_N ∝ N^e の e を求める（N が3個未満なら NaN）。"""
    if len(per_n) < 3:
        return math.nan
    return power_law_fit(per_n).params["exponent"]


def _fit_pooled(
    spectra: Sequence[Spectrum],
    lo: float,
    hi: float,
    transform,
    model: str,
    exponent_name: str,
    amplitude_name: str,
    exponent_sign: float,
) -> FitResult:
    points = _pooled_points(spectra, lo, hi)
    xs = np.concatenate([transform(u) for _, u, _ in points])
    ys = np.concatenate([np.log(f * math.sqrt(n)) for n, _, f in points])
    slope, intercept = np.polyfit(xs, ys, 1)
    amplitude = math.exp(intercept)

    per_n = []
    for n, u, f in points:
        if u.size >= 2:
            _, b = np.polyfit(transform(u), np.log(f), 1)
            per_n.append((n, math.exp(b)))
    model_vals = np.exp(intercept + slope * xs)
    data_vals = np.exp(ys)
    residual = float(np.sqrt(np.mean(((model_vals - data_vals) / data_vals) ** 2)))
    return FitResult(
        model=model,
        params={
            amplitude_name: amplitude,
            exponent_name: exponent_sign * float(slope),
            "amplitude_exponent": _amplitude_exponent(per_n),
        },
        window=(lo * math.pi, hi * math.pi),
        residual=residual,
    )


def fit_fourier_small_k(spectra: Sequence[Spectrum]) -> FitResult:
    """小さい k の包絡線 F = (A/√N)(k/π)^(-c) を全 N まとめて当てはめる。

    params: A, c, amplitude_exponent（N ごとの振幅の N 依存指数、-1/2 が期待値）
    """
    return _fit_pooled(
        spectra, 0.0, SMALL_K_MAX, np.log, "fourier-small-k", "c", "A", -1.0
    )


def magnitude_envelope(s: Spectrum, window: tuple[float, float]) -> EnvelopeSeries:
    """|F| の上側包絡点のうち 0 < k < π かつ正のもの。"""
    env = series_envelope(s.k_grid, np.abs(s.components), "upper", window)
    keep = (env.positions > 0.0) & (env.positions < math.pi) & (env.values > 0.0)
    return EnvelopeSeries("upper", env.positions[keep], env.values[keep])


def fit_fourier_large_k(spectra: Sequence[Spectrum]) -> FitResult:
    """大きい k の |F| 上側包絡線 F_e = (P0 + A'(1 - k/π)^c')/√N を当てはめる。

    全 N の F_e √N をまとめてオフセット付きで当てはめ、N ごとの振幅は
    共通の (P0, c') で取り直して N 依存の指数を求める。

    params: A, c, P0, amplitude_exponent
    """
    if not spectra:
        raise ValueError("スペクトルが1つも与えられていません。")
    points = []
    for s in spectra:
        env = magnitude_envelope(s, (LARGE_K_MIN * math.pi, math.pi))
        points.append((s.n_steps, 1.0 - env.positions / math.pi, env.values))
    u = np.concatenate([p[1] for p in points])
    y = np.concatenate([f * math.sqrt(n) for n, _, f in points])
    if u.size < MIN_FIT_POINTS:
        raise ValueError("フーリエ包絡線フィットの点が不足しています。")
    p0, amplitude, exponent = fit_offset_power(u, y)

    per_n = []
    for n, un, fn in points:
        shifted = fn - p0 / math.sqrt(n)
        keep = shifted > 0.0
        if np.count_nonzero(keep) >= 2:
            log_amp = np.mean(np.log(shifted[keep]) - exponent * np.log(un[keep]))
            per_n.append((n, math.exp(float(log_amp))))
    model_vals = p0 + amplitude * u**exponent
    return FitResult(
        model="fourier-large-k",
        params={
            "A": amplitude,
            "c": exponent,
            "P0": p0,
            "amplitude_exponent": _amplitude_exponent(per_n),
        },
        window=(LARGE_K_MIN * math.pi, math.pi),
        residual=float(np.sqrt(np.mean(((model_vals - y) / y) ** 2))),
    )


def fit_spectrum_slice(s: Spectrum, region: str) -> FitResult:
    """2D スペクトル断面の |F| 上側包絡線を1つの N で当てはめる。

    - small: F_e = P0 + a (k/π)^(-c)、0 < k/π ≤ 0.2
    - large: F_e = P0 + a (1 - k/π)^c'、0.4 ≤ k/π < 1
    """
    if region == "small":
        lo, hi, model, sign = 0.0, SMALL_K_MAX, "fourier-small-k", -1.0
    elif region == "large":
        lo, hi, model, sign = LARGE_K_MIN, 1.0, "fourier-large-k", 1.0
    else:
        raise ValueError(f"region は small/large のいずれかです: {region}")
    env = magnitude_envelope(s, (lo * math.pi, hi * math.pi))
    if len(env) < MIN_FIT_POINTS:
        raise ValueError(f"断面 {s.label} の包絡点が不足しています（{len(env)} 点）。")
    u = env.positions / math.pi if region == "small" else 1.0 - env.positions / math.pi
    p0, a, slope = fit_offset_power(u, env.values)
    model_vals = p0 + a * u**slope
    return FitResult(
        model=model,
        params={"P0": p0, "a": a, "c": sign * slope, "A": a * math.sqrt(s.n_steps)},
        window=(lo * math.pi, hi * math.pi),
        residual=float(np.sqrt(np.mean(((model_vals - env.values) / env.values) ** 2))),
    )


def fourier_beats(s: Spectrum, *, threshold: float = NODE_THRESHOLD) -> BeatReport:
    """k = π 手前のビート区間を再スケール軸 Nk/2π 上で検出する。

    最後の区間（segments[-1]）が k = π に最も近い完全なビート。
    """
    n = s.n_steps
    window = (BEAT_WINDOW[0] * n, BEAT_WINDOW[1] * n)
    report = detect_beats_series(
        s.rescaled,
        s.components,
        window,
        reference_width=REFERENCE_WIDTH_SCALE * math.sqrt(n),
        threshold=threshold,
    )
    if not report.segments:
        logger.warning("N=%d: フーリエ空間でビート区間が見つかりません。", n)
    return report
