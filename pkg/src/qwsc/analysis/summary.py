# src/qwsc/analysis/summary.py
"""1回分の 1D 分布に対する解析をまとめて実行する。"""

import logging

from qwsc.analysis.beats import detect_beats
from qwsc.analysis.fitting import fit_envelope_center, fit_envelope_outer, fit_tail
from qwsc.analysis.peaks import (
    count_windows,
    extract_envelope,
    locate_xmax,
    reference_points,
    total_peaks,
)
from qwsc.walks.distribution import Distribution


logger = logging.getLogger(__name__)


# --- 定数
PEAK_WINDOW_FRACTION = 0.1      # ピーク計数窓の幅（N の 1/10）
OUTER_WINDOW = (0.5, 0.69)      # 外側包絡線フィットの窓（N 単位）
CENTER_WINDOW = (0.0, 0.2)      # 中心部包絡線フィットの窓（N 単位）
BEAT_CENTER = 0.58              # ビートを探す位置（N 単位）
BEAT_HALF_WIDTH = 0.05          # ビート探索窓の半幅（N 単位）
MIN_ANALYSIS_STEPS = 100        # フィットまで行う最小ステップ数


def _guarded(label: str, func, *args, **kwargs) -> dict | None:
    """解析の1項目を実行し、入力不足による ValueError はログに残して None を返す。"""
    try:
        return func(*args, **kwargs).to_dict()
    except ValueError as e:
        logger.warning("%s を省略しました: %s", label, e)
        return None


def build_analysis_report(d: Distribution) -> dict:
    """x_max・代表点・窓ごとのピーク数・総ピーク数・包絡線フィット・裾・ビートをまとめる。"""
    n = d.n_steps
    x_max, p_max = locate_xmax(d)
    report: dict = {
        "n": n,
        "protocol": d.protocol,
        "x_max": x_max,
        "p_max": p_max,
        "x_max_ratio": x_max / n if n else None,
        "reference_points": reference_points(d),
        "total_peaks": total_peaks(d),
    }

    width = max(2, int(round(PEAK_WINDOW_FRACTION * n)))
    windows = [(lo, lo + width) for lo in range(0, n, width)]
    report["window_peaks"] = [r.to_dict() for r in count_windows(d, windows)]

    if n < MIN_ANALYSIS_STEPS:
        logger.info("N=%d は小さいのでフィットとビート解析を省略します。", n)
        return report

    outer = extract_envelope(d, "upper", (int(OUTER_WINDOW[0] * n), int(OUTER_WINDOW[1] * n)))
    center = extract_envelope(d, "upper", (0, int(CENTER_WINDOW[1] * n)))
    report["fits"] = {
        "outer": _guarded("外側包絡線フィット", fit_envelope_outer, outer, n),
        "center": _guarded("中心部包絡線フィット", fit_envelope_center, center, n),
        "tail": _guarded("裾フィット", fit_tail, d, n),
    }
    beat_window = (
        int((BEAT_CENTER - BEAT_HALF_WIDTH) * n),
        int((BEAT_CENTER + BEAT_HALF_WIDTH) * n),
    )
    report["beats"] = _guarded("ビート検出", detect_beats, d, beat_window)
    return report
