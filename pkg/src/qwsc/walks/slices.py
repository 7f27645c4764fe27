# src/qwsc/walks/slices.py
"""2D 分布の1次元スライス（A: 軸、B: 対角、C: 端）とその包絡線フィット。"""

from collections.abc import Mapping
import logging
import math

import numpy as np

from qwsc.analysis.fitting import fit_offset_inverse_power
from qwsc.analysis.peaks import count_peaks, series_envelope
from qwsc.analysis.reports import FitResult
from qwsc.walks.distribution import Distribution, Distribution2D, live_parity


logger = logging.getLogger(__name__)


# --- 定数
TENSOR_EDGE_FRACTION = 0.7          # テンソル積ウォークのスライス C の位置 x = 0.7N
SLICE_SINGULARITY = {               # 包絡線の発散点 b / N
    "A1": 1.0 / math.sqrt(2),
    "B1": 1.0 / math.sqrt(2),
    "A2": 1.0,
    "B2": 0.8,
}
FIT_WINDOW_FRACTION = (0.0, 0.95)   # フィット窓 [0, 0.95 b]
RAW_SERIES_SLICES = ("A2",)         # 振動しないので包絡線ではなく値そのものを使う


def _edge_row(d: Distribution2D) -> int:
    """スライス C の x 座標。"""
    n = d.n_steps
    if d.protocol in ("aqw-2d", "grover-2d"):
        return n
    x0 = math.floor(TENSOR_EDGE_FRACTION * n + 0.5)
    if (x0 - n) % 2 != 0:
        x0 = x0 - 1 if x0 > 0 else x0 + 1
    return x0


def extract_slice(d: Distribution2D, which: str) -> Distribution:
    """2D 分布から生存パリティのスライスを取り出す。

    - A: 行 y = n mod 2 上の P(x, y)
    - B: 対角 P(x, x)
    - C: 端の行 P(x_C, y)。AQW/グローバーは x_C = N、それ以外は 0.7N に近い生存行
    """
    n = d.n_steps
    live = np.arange(-n, n + 1, 2, dtype=np.int64)
    idx = live - d.grid_min
    if which == "A":
        y0 = n % 2
        probs = d.probs[idx, y0 - d.grid_min]
    elif which == "B":
        probs = d.probs[idx, idx]
    elif which == "C":
        x0 = _edge_row(d)
        probs = d.probs[x0 - d.grid_min, idx]
    else:
        raise ValueError(f"未知のスライス名です: {which}")
    return Distribution(
        n_steps=n,
        positions=live,
        probs=probs,
        parity=live_parity(n),
        protocol=d.protocol,
        slice_tag=which,
    )


def diagonal_peak_count(d: Distribution2D) -> int:
    """対角スライス B の片側（x ≥ 0）のピーク数。"""
    s = extract_slice(d, "B")
    return count_peaks(s.positions, s.probs)


def _fit_points(s: Distribution, n_steps: int, which: str) -> tuple[np.ndarray, np.ndarray, float]:
    if which not in SLICE_SINGULARITY:
        raise ValueError(f"スライスの種類は A1/B1/A2/B2 のいずれかです: {which}")
    b = SLICE_SINGULARITY[which] * n_steps
    lo, hi = FIT_WINDOW_FRACTION[0] * b, FIT_WINDOW_FRACTION[1] * b
    if which in RAW_SERIES_SLICES:
        live = s.live()
        x, v = live.positions.astype(np.float64), live.probs
        mask = (x >= lo) & (x <= hi) & (v > 0.0)
        return x[mask], v[mask], b
    env = series_envelope(s.positions, s.probs, "upper", (lo, hi))
    return env.positions, env.values, b


def fit_slice_envelope(s: Distribution, n_steps: int, which: str) -> FitResult:
    """y = P0 + a (b - x)^(-c) を1つの N について当てはめる（P0 = a1/N²）。

    which は A1/B1（テンソル積ウォーク）、A2/B2（交互ウォーク）。
    """
    x, v, b = _fit_points(s, n_steps, which)
    p0, a, c = fit_offset_inverse_power(x, v, b)
    model = p0 + a * (b - x) ** (-c)
    residual = float(np.sqrt(np.mean(((model - v) / v) ** 2)))
    return FitResult(
        model="slice-2d",
        params={"P0": p0, "a": a, "b": b, "c": c, "a1": p0 * n_steps**2},
        window=(float(x.min()), float(x.max())),
        residual=residual,
    )


def fit_slice_family(slices: Mapping[int, Distribution], which: str) -> FitResult:
    """複数の N のスライスから指数 c と振幅の N 依存 a ∝ N^(-d) を求める。

    共通の c（各 N の平均）で振幅を取り直し、log a を log N に回帰する。
    """
    ns = sorted(slices)
    if len(ns) < 2:
        raise ValueError("スライス族のフィットには N が2個以上必要です。")
    fits = {n: fit_slice_envelope(slices[n], n, which) for n in ns}
    c = float(np.mean([fits[n].params["c"] for n in ns]))

    log_amp = []
    for n in ns:
        x, v, b = _fit_points(slices[n], n, which)
        shifted = v - fits[n].params["P0"]
        keep = shifted > 0.0
        log_amp.append(float(np.mean(np.log(shifted[keep]) + c * np.log(b - x[keep]))))
    slope, _ = np.polyfit(np.log(ns), log_amp, 1)
    d = -float(slope)
    logger.info("スライス族 %s: c=%.4f d=%.4f c+d=%.4f", which, c, d, c + d)
    return FitResult(
        model="slice-family",
        params={"c": c, "d": d, "c_plus_d": c + d},
        window=(float(ns[0]), float(ns[-1])),
        residual=float(np.std([fits[n].params["c"] for n in ns])),
        series={
            "n": [float(n) for n in ns],
            "c": [fits[n].params["c"] for n in ns],
            "log_amplitude": log_amp,
        },
    )
