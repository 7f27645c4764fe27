# src/qwsc/references/classical.py
"""古典ランダムウォークの参照分布（二項分布・ガウス極限）。"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import stats

from qwsc.walks.distribution import Distribution, Distribution2D, live_parity


# --- 定数
EXACT_ROW_MAX = 64          # 整数モードで扱う二項係数の行の上限


@dataclass(frozen=True)
class GaussianModel:
    """P(x) = P0 + A exp(-(x - b)² / 2σ²)。"""

    p0: float
    amplitude: float
    center: float
    sigma: float

    def __post_init__(self) -> None:
        if not self.sigma > 0.0:
            raise ValueError(f"σ は正である必要があります: {self.sigma}")


    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return self.p0 + self.amplitude * np.exp(-((x - self.center) ** 2) / (2.0 * self.sigma**2))


    @staticmethod
    def from_fit(params: dict[str, float]) -> "GaussianModel":
        """ガウスフィットのパラメータ辞書からモデルを作る。"""
        return GaussianModel(
            p0=params.get("P0", 0.0),
            amplitude=params["A"],
            center=params.get("b", 0.0),
            sigma=params["sigma"],
        )


def binomial_distribution(n: int) -> Distribution:
    """n ステップ古典ウォークの分布 P(x) = 2^-n C(n, (n-x)/2)。

    scipy の pmf は対数空間で評価されるので n = 10^6 でもあふれない。
    """
    if n < 0:
        raise ValueError(f"n は0以上である必要があります: {n}")
    positions = np.arange(-n, n + 1, 2, dtype=np.int64)
    k = (positions + n) // 2
    probs = stats.binom.pmf(k, n, 0.5)
    return Distribution(
        n_steps=n,
        positions=positions,
        probs=probs,
        parity=live_parity(n),
        protocol="classical-1d",
    )


def binomial_coefficient_row(n: int) -> list[int]:
    """パスカルの三角形の第 n 行を厳密な整数で返す。"""
    if n < 0:
        raise ValueError(f"n は0以上である必要があります: {n}")
    if n > EXACT_ROW_MAX:
        raise ValueError(
            f"整数モードは n ≤ {EXACT_ROW_MAX} までです（指定 {n}）。"
            " 実数が必要なら binomial_distribution() を使ってください。"
        )
    return [math.comb(n, k) for k in range(n + 1)]


def gaussian_2d(n: int, x, y):
    """2D 古典ウォークの極限 (1/2πn) exp(-(x² + y²)/2n)。配列も受け付ける。"""
    if n <= 0:
        raise ValueError(f"n は正である必要があります: {n}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    value = np.exp(-(x * x + y * y) / (2.0 * n)) / (2.0 * math.pi * n)
    return float(value) if value.ndim == 0 else value


def classical_walk_2d(n: int) -> Distribution2D:
    """x と y が毎ステップ独立に ±1 動く古典ウォークの分布。"""
    row = binomial_distribution(n)
    line = np.zeros(2 * n + 1, dtype=np.float64)
    line[row.positions + n] = row.probs
    return Distribution2D(
        n_steps=n,
        grid_min=-n,
        probs=np.outer(line, line),
        protocol="classical-2d",
    )
