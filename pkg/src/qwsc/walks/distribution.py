# src/qwsc/walks/distribution.py
"""確率分布 (1D/2D) の保持・検証・入出力を提供するモジュール。"""

from collections.abc import Sequence
from dataclasses import dataclass, field
import json
import logging
import math
from pathlib import Path

from filelock import FileLock
import numpy as np


logger = logging.getLogger(__name__)


# --- 定数
PROTOCOLS_1D = ("quantum-1d", "classical-1d")
PROTOCOLS_2D = ("tensor-2d", "aqw-2d", "grover-2d", "classical-2d")
PARITIES = ("even", "odd", "all")
SLICE_TAGS = ("A", "B", "C")

DRIFT_PER_STEP = 1e-12      # 1ステップあたりの規格化ずれ許容量
DRIFT_FLOOR = 1e-9          # 規格化ずれ許容量の下限
FLOAT_FORMAT = ".17g"       # CSV に書く実数の書式（17有効桁）
CSV_KEYS_1D = "protocol,n_steps,parity"


def live_parity(n_steps: int) -> str:
    """ステップ数 n から生存サイトのパリティ名を返す。"""
    return "even" if n_steps % 2 == 0 else "odd"


def drift_tolerance(n_steps: int) -> float:
    """n ステップ後に許される |ΣP - 1| の上限。"""
    return max(DRIFT_FLOOR, n_steps * DRIFT_PER_STEP)


def check_normalization(total: float, n_steps: int, label: str) -> bool:
    """総確率が許容範囲内か確認し、外れていれば警告ログを出す。"""
    drift = abs(total - 1.0)
    if drift > drift_tolerance(n_steps):
        logger.warning(
            "規格化ずれが許容量を超えました: %s n=%d |ΣP-1|=%.3e (許容 %.3e)",
            label, n_steps, drift, drift_tolerance(n_steps),
        )
        return False
    return True


def site_probability(*components: np.ndarray, ordered: bool = True) -> np.ndarray:
    """コイン成分の振幅からサイトごとの確率 Σ|ψ_c|² を計算する。

    パラメータ
    ----------
    *components : np.ndarray
        同じ形状の複素振幅配列（コイン成分ごと）。
    ordered : bool, optional
        True なら実部・虚部の二乗を昇順に並べてから足す。
        成分の入れ替えと符号反転に対して結果がビット単位で不変になる。

    戻り値
    ------
    np.ndarray
        実数の確率配列。
    """
    squares = []
    for comp in components:
        squares.append(np.square(comp.real))
        squares.append(np.square(comp.imag))
    if not ordered:
        total = squares[0].copy()
        for sq in squares[1:]:
            total += sq
        return total

    stacked = np.sort(np.stack(squares, axis=-1), axis=-1)
    total = stacked[..., 0].copy()
    for i in range(1, stacked.shape[-1]):
        total += stacked[..., i]
    return total


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _format_float(value: float) -> str:
    return format(float(value), FLOAT_FORMAT)


def _write_text(path: Path, text: str) -> None:
    """ロックを取得してテキストを書き出す。"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _read_text(path: Path) -> str:
    with FileLock(str(path) + ".lock"):
        with open(path, "r", encoding="utf-8") as f:
            return f.read()


@dataclass(frozen=True, eq=False)
class Distribution:
    """位置ごとの確率列（1D 分布または 2D 分布の切り出し）。

    Notes
    -----
    - positions は昇順。parity が even/odd のときは生存サイトのみを持つ。
    - 切り出し (slice) の場合は総和が 1 にならないので、規格化は
      ``check_normalization`` で明示的に確認する。
    - 配列は読み取り専用。スレッド間で共有してよい。
    """

    n_steps: int
    positions: np.ndarray
    probs: np.ndarray
    parity: str
    protocol: str
    slice_tag: str | None = None

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=np.int64)
        probs = np.array(self.probs, dtype=np.float64)
        if positions.ndim != 1 or positions.shape != probs.shape:
            raise ValueError("positions と probs は同じ長さの1次元配列である必要があります。")
        if self.n_steps < 0:
            raise ValueError(f"n_steps は0以上である必要があります: {self.n_steps}")
        if self.parity not in PARITIES:
            raise ValueError(f"未知のパリティです: {self.parity}")
        if self.protocol not in PROTOCOLS_1D + PROTOCOLS_2D:
            raise ValueError(f"未知のプロトコルです: {self.protocol}")
        if self.slice_tag is not None and self.slice_tag not in SLICE_TAGS:
            raise ValueError(f"未知のスライス名です: {self.slice_tag}")
        if positions.size > 1 and np.any(np.diff(positions) <= 0):
            raise ValueError("positions は狭義単調増加である必要があります。")
        if np.any(probs < 0.0):
            raise ValueError("確率に負の値が含まれています。")
        object.__setattr__(self, "positions", _readonly(positions))
        object.__setattr__(self, "probs", _readonly(probs))


    def total(self) -> float:
        """総確率（math.fsum による順序非依存の和）。"""
        return math.fsum(self.probs.tolist())


    def value_at(self, x: int) -> float:
        """位置 x の確率。範囲外・死にサイトは 0。"""
        idx = int(np.searchsorted(self.positions, x))
        if idx < self.positions.size and self.positions[idx] == x:
            return float(self.probs[idx])
        return 0.0


    def as_dict(self) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.positions, self.probs)}


    def live(self) -> "Distribution":
        """生存パリティのサイトだけに絞った分布を返す。"""
        if self.parity != "all":
            return self
        want = self.n_steps % 2
        mask = (self.positions - want) % 2 == 0
        return Distribution(
            n_steps=self.n_steps,
            positions=self.positions[mask],
            probs=self.probs[mask],
            parity=live_parity(self.n_steps),
            protocol=self.protocol,
            slice_tag=self.slice_tag,
        )


    def to_csv(self, path: str | Path, header_lines: Sequence[str] = ()) -> None:
        """CSV 形式で保存する。

        先頭にコメント行（来歴、メタデータ）を置き、以降は
        ``position,probability`` 行を昇順に並べる。
        """
        lines = [f"# {h}" for h in header_lines]
        if self.slice_tag is None:
            lines.append(f"# {CSV_KEYS_1D}")
            lines.append(f"# {self.protocol},{self.n_steps},{self.parity}")
        else:
            lines.append(f"# {CSV_KEYS_1D},slice")
            lines.append(f"# {self.protocol},{self.n_steps},{self.parity},{self.slice_tag}")
        lines.append("position,probability")
        for x, p in zip(self.positions.tolist(), self.probs.tolist()):
            lines.append(f"{x},{_format_float(p)}")
        _write_text(Path(path), "\n".join(lines) + "\n")
        logger.debug("分布を保存: %s", path)


    @staticmethod
    def from_csv(path: str | Path) -> "Distribution":
        """``to_csv`` で書いた CSV を読込む。"""
        text = _read_text(Path(path))
        meta: dict[str, str] = {}
        positions: list[int] = []
        probs: list[float] = []
        pending_keys: list[str] | None = None
        for line in text.splitlines():
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith(CSV_KEYS_1D):
                    pending_keys = body.split(",")
                elif pending_keys is not None:
                    meta = dict(zip(pending_keys, body.split(",")))
                    pending_keys = None
                continue
            if not line or line.startswith("position"):
                continue
            x_str, p_str = line.split(",")
            positions.append(int(x_str))
            probs.append(float(p_str))
        if not meta:
            raise ValueError(f"分布CSVのメタデータ行がありません: {path}")
        return Distribution(
            n_steps=int(meta["n_steps"]),
            positions=np.asarray(positions, dtype=np.int64),
            probs=np.asarray(probs, dtype=np.float64),
            parity=meta["parity"],
            protocol=meta["protocol"],
            slice_tag=meta.get("slice") or None,
        )


    def to_json(self, path: str | Path, provenance: dict[str, str] | None = None) -> None:
        """CSV と同じ内容を JSON で保存する。"""
        payload = {
            "protocol": self.protocol,
            "n_steps": self.n_steps,
            "parity": self.parity,
            "slice": self.slice_tag,
            "positions": self.positions.tolist(),
            "probabilities": self.probs.tolist(),
        }
        if provenance:
            payload["provenance"] = dict(provenance)
        _write_text(Path(path), json.dumps(payload, sort_keys=True, indent=1) + "\n")


    @staticmethod
    def from_json(path: str | Path) -> "Distribution":
        data = json.loads(_read_text(Path(path)))
        return Distribution(
            n_steps=int(data["n_steps"]),
            positions=np.asarray(data["positions"], dtype=np.int64),
            probs=np.asarray(data["probabilities"], dtype=np.float64),
            parity=data["parity"],
            protocol=data["protocol"],
            slice_tag=data.get("slice"),
        )


@dataclass(frozen=True, eq=False)
class Distribution2D:
    """正方格子 [grid_min, grid_max]² 上の確率 P(x, y)。

    probs[i, j] が (x, y) = (grid_min + i, grid_min + j) に対応する。
    死にサイト（パリティ不一致）は 0 のまま保持する。
    """

    n_steps: int
    grid_min: int
    probs: np.ndarray
    protocol: str
    grid_max: int = field(init=False)

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 2 or probs.shape[0] != probs.shape[1]:
            raise ValueError("2D 分布は正方行列である必要があります。")
        if self.protocol not in PROTOCOLS_2D:
            raise ValueError(f"未知の2Dプロトコルです: {self.protocol}")
        if np.any(probs < 0.0):
            raise ValueError("確率に負の値が含まれています。")
        object.__setattr__(self, "probs", _readonly(probs))
        object.__setattr__(self, "grid_max", self.grid_min + probs.shape[0] - 1)


    @property
    def coords(self) -> np.ndarray:
        """各軸の座標列。"""
        return np.arange(self.grid_min, self.grid_max + 1, dtype=np.int64)


    def total(self) -> float:
        return math.fsum(self.probs.ravel().tolist())


    def value_at(self, x: int, y: int) -> float:
        if not (self.grid_min <= x <= self.grid_max and self.grid_min <= y <= self.grid_max):
            return 0.0
        return float(self.probs[x - self.grid_min, y - self.grid_min])


    def to_csv(self, path: str | Path, header_lines: Sequence[str] = ()) -> Path:
        """行優先の CSV と JSON サイドカーを保存し、サイドカーのパスを返す。"""
        path = Path(path)
        lines = [f"# {h}" for h in header_lines]
        for row in self.probs:
            lines.append(",".join(_format_float(p) for p in row.tolist()))
        _write_text(path, "\n".join(lines) + "\n")

        sidecar = path.with_suffix(".json")
        meta = {
            "protocol": self.protocol,
            "n": self.n_steps,
            "grid_min": self.grid_min,
            "grid_max": self.grid_max,
        }
        _write_text(sidecar, json.dumps(meta, sort_keys=True, indent=1) + "\n")
        logger.debug("2D分布を保存: %s", path)
        return sidecar


    @staticmethod
    def from_csv(path: str | Path) -> "Distribution2D":
        path = Path(path)
        meta = json.loads(_read_text(path.with_suffix(".json")))
        rows = [
            [float(v) for v in line.split(",")]
            for line in _read_text(path).splitlines()
            if line and not line.startswith("#")
        ]
        return Distribution2D(
            n_steps=int(meta["n"]),
            grid_min=int(meta["grid_min"]),
            probs=np.asarray(rows, dtype=np.float64),
            protocol=meta["protocol"],
        )
