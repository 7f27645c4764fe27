# src/qwsc/analysis/scaling.py
"""複数の N にまたがるスケーリング解析（ピーク幅、代表点の確率）。"""

from collections.abc import Mapping
import logging

import numpy as np

from qwsc.analysis.fitting import power_law_fit
from qwsc.analysis.peaks import locate_xmax, peak_edges, reference_points
from qwsc.analysis.reports import FitResult
from qwsc.walks.distribution import Distribution


logger = logging.getLogger(__name__)


# --- 定数
PEAK_GROUP = 10             # 幅を測るピークの個数
MIN_RUNS = 4                # スケーリングに必要な N の数
MIN_DECADES_RATIO = 100.0   # 最大 N / 最小 N の下限（2桁）
RATIO_CORRECTION_EXPONENT = 1.0 / 3.0   # 比の有限 N 補正 ∝ N^(-1/3)


def _check_runs(runs: Mapping[int, Distribution]) -> list[int]:
    ns = sorted(runs)
    if len(ns) < MIN_RUNS or ns[0] <= 0 or ns[-1] / ns[0] < MIN_DECADES_RATIO:
        raise ValueError(
            f"N は {MIN_RUNS} 個以上かつ2桁以上の範囲が必要です: {ns}"
        )
    return ns


def _half_crossing(x: np.ndarray, v: np.ndarray, start: int, step: int, half: float) -> float:
    """start から step 方向に進み、値が half を下回る位置を線形補間で返す。

    下回る前に隣の極小に達したらその位置を返す。
    """
    i = start
    while 0 <= i + step < v.size:
        j = i + step
        if v[j] < half:
            frac = (v[i] - half) / (v[i] - v[j])
            return float(x[i] + frac * (x[j] - x[i]))
        if v[j] > v[i]:
            return float(x[i])
        i = j
    return float(x[i])


def peak_widths(d: Distribution) -> dict[str, float]:
    """1回分の分布から3種類の幅を測る。

    戻り値
    ------
    dict[str, float]
        first_10: x > 0 の10番目のピーク位置（x = 0 からの幅）
        last_10: x_max から、x_max までの最後の10ピークの先頭までの幅
        fwhm: 最大ピークの半値全幅
    """
    live = d.live()
    x, v = live.positions, live.probs
    left, _ = peak_edges(v)
    peaks = x[left]
    x_max, p_max = locate_xmax(d)

    right_side = peaks[peaks > 0]
    up_to_max = right_side[right_side <= x_max]
    if right_side.size < PEAK_GROUP or up_to_max.size < PEAK_GROUP:
        raise ValueError(f"x > 0 のピークが {PEAK_GROUP} 個未満です（N={d.n_steps}）。")

    idx = int(np.flatnonzero(x == x_max)[0])
    half = 0.5 * p_max
    fwhm = _half_crossing(x, v, idx, +1, half) - _half_crossing(x, v, idx, -1, half)
    return {
        "first_10": float(right_side[PEAK_GROUP - 1]),
        "last_10": float(x_max - up_to_max[-PEAK_GROUP]),
        "fwhm": fwhm,
    }


def width_scalings(runs: Mapping[int, Distribution]) -> dict[str, FitResult]:
    """幅の N 依存性をべき乗則で当てはめる（first_10, last_10, fwhm）。"""
    ns = _check_runs(runs)
    widths = {n: peak_widths(runs[n]) for n in ns}
    out: dict[str, FitResult] = {}
    for key in ("first_10", "last_10", "fwhm"):
        fit = power_law_fit([(n, widths[n][key]) for n in ns])
        out[key] = FitResult(
            model=fit.model,
            params=fit.params,
            window=fit.window,
            residual=fit.residual,
            series={"n": [float(n) for n in ns], "width": [widths[n][key] for n in ns]},
        )
        logger.info("幅スケーリング %s: 指数=%.4f", key, fit.params["exponent"])
    return out


def extrapolate_ratio(ns: list[int], ratios: list[float]) -> float:
    """比を N^(-1/3) の一次式で当てはめ、N → ∞ の切片を返す。"""
    if len(ns) != len(ratios) or len(ns) < 2:
        raise ValueError("外挿には N と比の組が2つ以上必要です。")
    t = np.power(np.asarray(ns, dtype=np.float64), -RATIO_CORRECTION_EXPONENT)
    _, intercept = np.polyfit(t, np.asarray(ratios, dtype=np.float64), 1)
    return float(intercept)


def reference_point_scaling(runs: Mapping[int, Distribution]) -> dict[str, FitResult | float]:
    """代表点の確率の N 依存性と P(N/√2)/P(x_max) の比。

    ballistic_ratio は N → ∞ への外挿値、ballistic_ratio_largest_n は最大 N での値。

    N は3個以上あればよい（代表点は N 全体で定義されるため）。
    """
    ns = sorted(runs)
    if len(ns) < 3:
        raise ValueError(f"代表点スケーリングには N が3個以上必要です: {ns}")
    points = {n: reference_points(runs[n]) for n in ns}
    out: dict[str, FitResult | float] = {}
    for name in points[ns[0]]:
        fit = power_law_fit([(n, points[n][name]) for n in ns])
        out[name] = FitResult(
            model=fit.model,
            params=fit.params,
            window=fit.window,
            residual=fit.residual,
            series={"n": [float(n) for n in ns], "probability": [points[n][name] for n in ns]},
        )
    ratios = [points[n]["ballistic"] / points[n]["x_max"] for n in ns]
    out["ballistic_ratio"] = extrapolate_ratio(ns, ratios)
    out["ballistic_ratio_largest_n"] = float(ratios[-1])
    logger.info(
        "P(N/√2)/P(x_max): 外挿=%.4f 最大 N=%.4f", out["ballistic_ratio"], ratios[-1]
    )
    return out
