# src/qwsc/analysis/fitting.py
"""包絡線・裾・ガウス・べき乗則のフィット。

オフセットが固定のモデルは対数変換した座標での線形回帰に帰着させる。
オフセットが自由なモデル（中心部の二次形、2D スライス、フーリエ包絡線）は
線形空間の相対残差を least_squares で最小化する。
"""

from collections.abc import Sequence
import logging
import math

import numpy as np
from scipy import optimize

from qwsc.analysis.reports import EnvelopeSeries, FitResult
from qwsc.walks.distribution import Distribution


logger = logging.getLogger(__name__)


# --- 定数
OUTER_OFFSET_B = 1.884          # 外側包絡線のオフセット P0 = -B/N
TAIL_EXPONENT = 1.5             # 裾の指数 (x - b)^1.5
TAIL_WINDOW_SCALE = 5.0         # 裾の窓幅 = 5 N^(1/3)
OFFSET_SCAN_POINTS = 65         # オフセット探索の粗い格子点数
OFFSET_SPAN_FACTOR = 4.0        # オフセット下限 = min - 4 * (max - min)
OFFSET_TOLERANCE = 1e-14        # least_squares の収束判定
TINY_PROBABILITY = 1e-300       # 対数を取る前に除外する値


def _rms_relative(model: np.ndarray, data: np.ndarray) -> float:
    return float(np.sqrt(np.mean(((model - data) / data) ** 2)))


def _line(x: np.ndarray, y: np.ndarray, w: np.ndarray | None = None) -> tuple[float, float]:
    """y = slope * x + intercept の最小二乗解。"""
    if x.size < 2:
        raise ValueError("回帰には2点以上が必要です。")
    slope, intercept = np.polyfit(x, y, 1, w=w)
    return float(slope), float(intercept)


def power_law_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """(x, y) 列に y = A x^p を両対数の線形回帰で当てはめる。

    戻り値の params は exponent（p）と prefactor（A）。
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 3:
        raise ValueError("べき乗則フィットには3点以上が必要です。")
    x, y = arr[:, 0], arr[:, 1]
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("べき乗則フィットの入力は正である必要があります。")
    slope, intercept = _line(np.log(x), np.log(y))
    prefactor = math.exp(intercept)
    return FitResult(
        model="power-law",
        params={"exponent": slope, "prefactor": prefactor},
        window=(float(x.min()), float(x.max())),
        residual=_rms_relative(prefactor * x**slope, y),
    )


def _offset_profile(u: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    """values = P0 + a u^s を線形空間の相対残差で当てはめ (P0, s, log a) を返す。

    P0 の粗い格子ごとに対数回帰で (s, log a) を出し、相対残差が最小の
    点を初期値として least_squares で3変数を同時に詰める。P0 < min(values)。
    """
    if np.any(values <= 0.0):
        raise ValueError("オフセット付きフィットの値は正である必要があります。")
    lo_v = float(values.min())
    span = float(values.max()) - lo_v
    if span <= 0.0:
        raise ValueError("包絡値が一定なのでオフセットを決められません。")
    scale = float(u.max())
    log_u = np.log(u / scale)

    def residual(theta: np.ndarray) -> np.ndarray:
        p0, log_a, s = theta
        return (p0 + np.exp(log_a + s * log_u) - values) / values

    # --- 粗い格子で初期値を選ぶ
    upper = lo_v - span * 1e-9
    lower = lo_v - OFFSET_SPAN_FACTOR * span
    best: np.ndarray | None = None
    best_cost = math.inf
    for p0 in np.linspace(lower, upper, OFFSET_SCAN_POINTS):
        slope, intercept = _line(log_u, np.log(values - p0))
        theta = np.array([p0, intercept, slope])
        cost = float(np.sum(residual(theta) ** 2))
        if cost < best_cost:
            best, best_cost = theta, cost

    res = optimize.least_squares(
        residual,
        best,
        bounds=([-np.inf, -np.inf, -np.inf], [lo_v, np.inf, np.inf]),
        x_scale="jac",
        ftol=OFFSET_TOLERANCE,
        xtol=OFFSET_TOLERANCE,
        gtol=OFFSET_TOLERANCE,
    )
    theta = res.x if 2.0 * res.cost <= best_cost else best
    if not res.success:
        logger.debug("オフセット付きフィットが収束しませんでした: %s", res.message)
    p0, log_a, s = (float(v) for v in theta)
    return p0, s, log_a - s * math.log(scale)


def fit_envelope_outer(
    e: EnvelopeSeries,
    n_steps: int,
    *,
    b: float | None = None,
    offset_b: float = OUTER_OFFSET_B,
) -> FitResult:
    """外側の包絡線 P_e = P0 + a (b - x)^(-c)、b = N/√2, P0 = -B/N 固定。"""
    b = n_steps / math.sqrt(2) if b is None else b
    p0 = -offset_b / n_steps
    mask = e.positions < b
    x = e.positions[mask]
    pe = e.values[mask]
    shifted = pe - p0
    if np.any(shifted <= 0.0):
        raise ValueError("P_e - P0 が正でない点が窓に含まれています。")
    slope, intercept = _line(np.log(b - x), np.log(shifted))
    a = math.exp(intercept)
    c = -slope
    model = p0 + a * (b - x) ** (-c)
    return FitResult(
        model="outer-algebraic",
        params={"P0": p0, "a": a, "b": b, "c": c, "A": a * math.sqrt(n_steps), "B": offset_b},
        window=(float(x.min()), float(x.max())),
        residual=_rms_relative(model, pe),
    )


def fit_envelope_center(
    e: EnvelopeSeries,
    n_steps: int,
    *,
    window: tuple[float, float] | None = None,
) -> FitResult:
    """中心部の包絡線 P_e = P0 + a' x^c'（P0 も推定する）。"""
    lo, hi = window if window is not None else (0.0, 0.2 * n_steps)
    mask = (e.positions > 0) & (e.positions >= lo) & (e.positions <= hi)
    x = e.positions[mask]
    pe = e.values[mask]
    if x.size < 3:
        raise ValueError("中心部フィットには x > 0 の包絡点が3点以上必要です。")
    p0, slope, intercept = _offset_profile(x, pe)
    a = math.exp(intercept)
    model = p0 + a * x**slope
    return FitResult(
        model="central-quadratic",
        params={
            "P0": p0,
            "a": a,
            "c": slope,
            "B": p0 * n_steps,
            "A": a * n_steps ** (slope + 1.0),
        },
        window=(float(x.min()), float(x.max())),
        residual=_rms_relative(model, pe),
    )


def fit_tail(
    d: Distribution,
    n_steps: int,
    *,
    window: tuple[float, float] | None = None,
) -> FitResult:
    """x > N/√2 の裾 P = a exp(-d (x - b)^1.5 / √N)、P0 = 0, b = N/√2 固定。"""
    b = n_steps / math.sqrt(2)
    lo, hi = window if window is not None else (b, b + TAIL_WINDOW_SCALE * n_steps ** (1.0 / 3.0))
    live = d.live()
    mask = (live.positions > max(lo, b)) & (live.positions <= hi) & (live.probs > TINY_PROBABILITY)
    x = live.positions[mask].astype(np.float64)
    p = live.probs[mask]
    if x.size < 2:
        raise ValueError(f"裾の窓 ({lo:.1f}, {hi:.1f}] に有効な点がありません。")
    s = (x - b) ** TAIL_EXPONENT / math.sqrt(n_steps)
    slope, intercept = _line(s, np.log(p))
    a = math.exp(intercept)
    model = a * np.exp(slope * s)
    return FitResult(
        model="tail",
        params={"P0": 0.0, "a": a, "b": b, "d": -slope, "A": a * n_steps ** (2.0 / 3.0)},
        window=(float(x.min()), float(x.max())),
        residual=_rms_relative(model, p),
    )


def fit_gaussian(
    positions: np.ndarray,
    values: np.ndarray,
    *,
    spacing: float = 2.0,
) -> FitResult:
    """P0 = b = 0 のガウス A exp(-x²/2σ²) を重み付き対数回帰で当てはめる。

    重みは P（中心付近を重視）。A は格子間隔 spacing で割って単位長さ
    あたりの値にする。
    """
    x = np.asarray(positions, dtype=np.float64)
    p = np.asarray(values, dtype=np.float64)
    mask = p > TINY_PROBABILITY
    x, p = x[mask], p[mask]
    if x.size < 3:
        raise ValueError("ガウスフィットには正の点が3点以上必要です。")
    slope, intercept = _line(x * x, np.log(p), w=np.sqrt(p))
    if slope >= 0.0:
        raise ValueError("ガウスの曲率が負になりません（分布が広がりすぎています）。")
    sigma = math.sqrt(-1.0 / (2.0 * slope))
    peak = math.exp(intercept)
    model = peak * np.exp(slope * x * x)
    return FitResult(
        model="gaussian",
        params={"P0": 0.0, "A": peak / spacing, "b": 0.0, "sigma": sigma},
        window=(float(x.min()), float(x.max())),
        residual=_rms_relative(model, p),
    )


def fit_offset_inverse_power(
    x: np.ndarray,
    values: np.ndarray,
    b: float,
) -> tuple[float, float, float]:
    """values = P0 + a (b - x)^(-c) を P0 自由で当てはめ (P0, a, c) を返す。"""
    x = np.asarray(x, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    mask = x < b
    if np.count_nonzero(mask) < 3:
        raise ValueError("x < b の点が3点以上必要です。")
    p0, slope, intercept = _offset_profile(b - x[mask], values[mask])
    return p0, math.exp(intercept), -slope


def fit_offset_power(u: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    """values = P0 + a u^s を P0 自由で当てはめ (P0, a, s) を返す（u > 0）。"""
    u = np.asarray(u, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if u.size < 3:
        raise ValueError("オフセット付きフィットには3点以上が必要です。")
    if np.any(u <= 0.0):
        raise ValueError("u は正である必要があります。")
    p0, slope, intercept = _offset_profile(u, values)
    return p0, math.exp(intercept), slope
