# src/qwsc/analysis/beats.py
"""上下の包絡線が近づく節からビート構造を検出するモジュール。

節の判定
--------
- 上側包絡線 U と下側包絡線 L を窓内の各点へ線形補間し、振幅 U - L を作る。
- 振幅をその近傍（幅 reference_width）の最大値で割ったものを相対ギャップとする。
- 相対ギャップが threshold を下回る連続区間ごとに最小点を1つ節とする。
  窓の端に接する区間は節にしない。
- 区間のピーク数は lo ≤ p < hi に入る上側包絡点の数。
"""

import logging
import math

import numpy as np
from scipy import ndimage

from qwsc.analysis.peaks import series_envelope
from qwsc.analysis.reports import BeatReport, BeatSegment
from qwsc.walks.distribution import Distribution


logger = logging.getLogger(__name__)


# --- 定数
NODE_THRESHOLD = 0.3            # 節とみなす相対ギャップの上限
REFERENCE_WIDTH_SCALE = 3.0     # 相対ギャップの基準幅 = 3√N（位置の単位）
MIN_WINDOW_SITES = 5            # ビート検出に必要な窓内の点数


def beat_nodes(gap: np.ndarray, threshold: float = NODE_THRESHOLD) -> list[int]:
    """相対ギャップの列から節の添字を返す。

    threshold を下回る連続区間の最小点（同値なら左側）を節とする。
    列の先頭または末尾に接する区間は捨てる。
    """
    gap = np.asarray(gap, dtype=np.float64)
    below = gap < threshold
    nodes: list[int] = []
    i = 0
    while i < gap.size:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < gap.size and below[j + 1]:
            j += 1
        if i > 0 and j < gap.size - 1:
            nodes.append(i + int(np.argmin(gap[i:j + 1])))
        i = j + 1
    return nodes


def envelope_gap(
    positions: np.ndarray,
    values: np.ndarray,
    window: tuple[float, float],
    reference_width: float,
) -> tuple[np.ndarray, np.ndarray]:
    """窓内の位置と相対ギャップ (U - L) / 近傍最大 を返す。"""
    positions = np.asarray(positions, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    lo, hi = float(window[0]), float(window[1])
    inside = (positions >= lo) & (positions <= hi)
    if np.count_nonzero(inside) < MIN_WINDOW_SITES:
        raise ValueError(f"窓 [{lo}, {hi}] が小さすぎます（{np.count_nonzero(inside)} 点）。")
    if reference_width <= 0.0:
        raise ValueError(f"基準幅は正である必要があります: {reference_width}")

    upper = series_envelope(positions, values, "upper")
    lower = series_envelope(positions, values, "lower")
    if len(upper) < 2 or len(lower) < 2:
        raise ValueError("包絡点が少なすぎてビートを検出できません。")
    xs = positions[inside]
    amplitude = np.clip(
        np.interp(xs, upper.positions, upper.values) - np.interp(xs, lower.positions, lower.values),
        0.0,
        None,
    )
    spacing = float(np.median(np.diff(xs)))
    size = max(3, int(round(reference_width / spacing)) | 1)
    reference = ndimage.maximum_filter1d(amplitude, size=size, mode="nearest")
    gap = np.divide(amplitude, reference, out=np.zeros_like(amplitude), where=reference > 0.0)
    return xs, gap


def detect_beats_series(
    positions: np.ndarray,
    values: np.ndarray,
    window: tuple[float, float],
    *,
    reference_width: float,
    threshold: float = NODE_THRESHOLD,
) -> BeatReport:
    """任意の振動列のビート区間を窓内で検出する。"""
    xs, gap = envelope_gap(positions, values, window, reference_width)
    node_positions = xs[beat_nodes(gap, threshold)]
    peaks = series_envelope(positions, values, "upper").positions

    segments = []
    for a, b in zip(node_positions[:-1], node_positions[1:]):
        count = int(np.count_nonzero((peaks >= a) & (peaks < b)))
        segments.append(BeatSegment(lo=float(a), hi=float(b), peak_count=count))
    logger.debug(
        "ビート検出: 窓=[%.1f, %.1f] 節=%d 区間=%d",
        window[0], window[1], node_positions.size, len(segments),
    )
    return BeatReport(
        segments=tuple(segments),
        nodes=tuple(float(x) for x in node_positions),
    )


def detect_beats(
    d: Distribution,
    window: tuple[int, int],
    *,
    threshold: float = NODE_THRESHOLD,
) -> BeatReport:
    """分布の生存サイト列でビート区間を検出する（基準幅 3√N）。"""
    live = d.live()
    return detect_beats_series(
        live.positions,
        live.probs,
        window,
        reference_width=REFERENCE_WIDTH_SCALE * math.sqrt(d.n_steps),
        threshold=threshold,
    )
