# src/qwsc/analysis/reports.py
"""解析結果のデータ型（ピーク・包絡線・フィット・ビート）。"""

from dataclasses import dataclass, field
import math

import numpy as np


# --- 定数
SIDES = ("upper", "lower")
FIT_MODELS = (
    "outer-algebraic",
    "central-quadratic",
    "tail",
    "gaussian",
    "fourier-small-k",
    "fourier-large-k",
    "slice-2d",
    "slice-family",
    "edge-gaussian",
    "power-law",
)


def _clean(value: float) -> float | None:
    """JSON に書けない NaN/inf を None にする。"""
    value = float(value)
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class PeakReport:
    """窓 [lo, hi] 内の極大位置とその個数。"""

    window: tuple[int, int]
    peak_positions: tuple[int, ...]
    count: int

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "peak_positions": list(self.peak_positions),
            "count": self.count,
        }


@dataclass(frozen=True, eq=False)
class EnvelopeSeries:
    """上側（極大）または下側（極小）の包絡点列。"""

    side: str
    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise ValueError(f"side は upper/lower のいずれかです: {self.side}")
        positions = np.array(self.positions, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if positions.shape != values.shape or positions.ndim != 1:
            raise ValueError("包絡線の位置と値の長さが一致しません。")
        if positions.size > 1 and np.any(np.diff(positions) <= 0):
            raise ValueError("包絡線の位置は狭義単調増加である必要があります。")
        positions.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "values", values)


    def __len__(self) -> int:
        return int(self.positions.size)


    def restrict(self, lo: float, hi: float) -> "EnvelopeSeries":
        """[lo, hi] に入る点だけを残す。"""
        mask = (self.positions >= lo) & (self.positions <= hi)
        return EnvelopeSeries(self.side, self.positions[mask], self.values[mask])


    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "positions": self.positions.tolist(),
            "values": self.values.tolist(),
        }


@dataclass(frozen=True)
class FitResult:
    """フィットのモデル名・パラメータ・窓・残差（相対 RMS）。"""

    model: str
    params: dict[str, float]
    window: tuple[float, float]
    residual: float
    series: dict[str, list[float]] | None = field(default=None)

    def __post_init__(self) -> None:
        if self.model not in FIT_MODELS:
            raise ValueError(f"未知のフィットモデルです: {self.model}")
        if not self.residual >= 0.0:
            raise ValueError(f"残差は0以上である必要があります: {self.residual}")


    def to_dict(self) -> dict:
        out = {
            "model": self.model,
            "params": {k: _clean(v) for k, v in self.params.items()},
            "window": [_clean(w) for w in self.window],
            "residual": _clean(self.residual),
        }
        if self.series is not None:
            out["series"] = {k: [_clean(v) for v in vals] for k, vals in self.series.items()}
        return out


@dataclass(frozen=True)
class BeatSegment:
    lo: float
    hi: float
    peak_count: int

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class BeatReport:
    """節で区切られたビート区間の列（互いに素で昇順）。"""

    segments: tuple[BeatSegment, ...]
    nodes: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.segments[:-1], self.segments[1:]):
            if b.lo < a.hi:
                raise ValueError("ビート区間が重なっています。")


    @property
    def widths(self) -> tuple[float, ...]:
        return tuple(s.width for s in self.segments)


    def containing(self, x: float) -> BeatSegment | None:
        """x を含む区間（なければ None）。"""
        for seg in self.segments:
            if seg.lo <= x <= seg.hi:
                return seg
        return None


    def to_dict(self) -> dict:
        return {
            "segments": [
                {"lo": s.lo, "hi": s.hi, "width": s.width, "peak_count": s.peak_count}
                for s in self.segments
            ],
            "nodes": list(self.nodes),
        }
