# src/qwsc/analysis/peaks.py
"""生存サイト列上のピーク検出・包絡線抽出・代表点の読み取り。

ピークの定義
-----------
- 両隣（生存パリティの隣）より真に大きい点。
- 等しい値が続く台地は、両端の外側がともに低ければ1個と数え、
  位置は台地の左端とする。
- 列の両端はピークにならない。
- 分布全体のピーク数は片側 x ≥ 0 で数える（中心のピークは1個）。
- 窓は閉区間。隣り合う窓の共有境界上のピークは下端側の窓に入る。
"""

from collections.abc import Sequence
import math

import numpy as np
from scipy import signal

from qwsc.analysis.reports import EnvelopeSeries, PeakReport
from qwsc.walks.distribution import Distribution


# --- 定数
REFERENCE_TARGETS = {
    "origin": 0.0,                        # x = 0
    "quarter": 1.0 / (2.0 * math.sqrt(2)),  # x = N/(2√2)
    "half": 0.5,                          # x = N/2
    "ballistic": 1.0 / math.sqrt(2),      # x = N/√2
    "tail": 0.7072,                       # x = 0.7072N
}


def peak_edges(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """極大（台地を含む）の左端・右端の添字を返す。"""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 3:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    _, props = signal.find_peaks(values, plateau_size=1)
    return props["left_edges"].astype(np.int64), props["right_edges"].astype(np.int64)


def _live_series(d: Distribution) -> tuple[np.ndarray, np.ndarray]:
    live = d.live()
    return live.positions, live.probs


def find_peaks(
    d: Distribution,
    window: tuple[int, int],
    *,
    include_hi: bool = True,
) -> PeakReport:
    """閉区間の窓 [lo, hi] 内のピークを数える。

    ピークは列全体で検出してから窓に帰属させる。include_hi=False なら
    上端 hi 上のピークを除く（hi を下端とする隣の窓に入れる）。
    """
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise ValueError(f"窓の下端が上端を超えています: [{lo}, {hi}]")
    positions, values = _live_series(d)
    if not np.any((positions >= lo) & (positions <= hi)):
        raise ValueError(f"窓 [{lo}, {hi}] に生存サイトがありません。")

    left, _ = peak_edges(values)
    found = positions[left]
    keep = (found >= lo) & ((found <= hi) if include_hi else (found < hi))
    selected = found[keep]
    return PeakReport(
        window=(lo, hi),
        peak_positions=tuple(int(p) for p in selected),
        count=int(selected.size),
    )


def count_windows(d: Distribution, windows: Sequence[tuple[int, int]]) -> list[PeakReport]:
    """窓の列でピークを数える。

    ある窓の上端が別の窓の下端と一致するとき、その境界上のピークは
    下端側の窓だけに数える。
    """
    starts = {int(w[0]) for w in windows}
    return [find_peaks(d, w, include_hi=int(w[1]) not in starts) for w in windows]


def count_peaks(positions: np.ndarray, values: np.ndarray) -> int:
    """片側（x ≥ 0）のピーク数。x = 0 をまたぐ中心の台地は1個と数える。"""
    positions = np.asarray(positions)
    values = np.asarray(values, dtype=np.float64)
    if values.size == 1:
        return 1
    _, right = peak_edges(values)
    return int(np.count_nonzero(positions[right] >= 0))


def total_peaks(d: Distribution) -> int:
    """分布の片側（x ≥ 0）のピーク総数。"""
    positions, values = _live_series(d)
    return count_peaks(positions, values)


def locate_xmax(d: Distribution) -> tuple[int, float]:
    """x ≥ 0 での最大確率の位置と値（同値なら大きい x）。"""
    positions, values = _live_series(d)
    mask = positions >= 0
    pos = positions[mask]
    val = values[mask]
    if pos.size == 0:
        raise ValueError("x ≥ 0 に生存サイトがありません。")
    idx = int(np.flatnonzero(val == val.max())[-1])
    return int(pos[idx]), float(val[idx])


def _snap_live(x: float, n_steps: int) -> int:
    """x を 0 方向に切り捨て、生存パリティのサイトに合わせる。"""
    site = int(math.floor(x))
    if (site - n_steps) % 2 != 0:
        site = site - 1 if site > 0 else site + 1
    return site


def reference_positions(d: Distribution) -> dict[str, int]:
    """代表点の名前 → 生存サイト位置。"""
    n = d.n_steps
    out = {name: _snap_live(frac * n, n) for name, frac in REFERENCE_TARGETS.items()}
    out["x_max"] = locate_xmax(d)[0]
    return out


def reference_points(d: Distribution) -> dict[str, float]:
    """代表点での上側包絡値（その点と両隣の最大値）。"""
    out: dict[str, float] = {}
    for name, x in reference_positions(d).items():
        out[name] = max(d.value_at(x - 2), d.value_at(x), d.value_at(x + 2))
    return out


def series_envelope(
    positions: np.ndarray,
    values: np.ndarray,
    side: str,
    window: tuple[float, float] | None = None,
) -> EnvelopeSeries:
    """任意の列から極大（upper）または極小（lower）を取り出す。"""
    positions = np.asarray(positions, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if side not in ("upper", "lower"):
        raise ValueError(f"side は upper/lower のいずれかです: {side}")
    lo, hi = window if window is not None else (positions.min(), positions.max())
    if np.count_nonzero((positions >= lo) & (positions <= hi)) < 3:
        raise ValueError(f"窓 [{lo}, {hi}] の点が3点未満です。")

    left, _ = peak_edges(values if side == "upper" else -values)
    pos = positions[left]
    val = values[left]
    keep = (pos >= lo) & (pos <= hi)
    return EnvelopeSeries(side=side, positions=pos[keep], values=val[keep])


def extract_envelope(d: Distribution, side: str, window: tuple[int, int]) -> EnvelopeSeries:
    """生存サイト列の包絡点を窓 [lo, hi] で取り出す。"""
    positions, values = _live_series(d)
    return series_envelope(positions, values, side, window)
