# src/qwsc/references/oracle.py
"""1Dアダマールウォークのフーリエ積分解による独立検証オラクル。

k 空間の1ステップ演算子 M(k) = diag(e^{-ik}, e^{ik}) U_H を固有値
e^{-iω_k}, -e^{iω_k}（sin ω_k = sin k/√2）で分解し、M(k)^t を閉じた形で
評価する。実空間の振幅は (1/2π)∫ e^{ikx} M(k)^t c0 dk を
区分 Gauss-Legendre 求積で計算する。
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from qwsc.walks.coins import SQRT_HALF, symmetric_coin
from qwsc.walks.distribution import Distribution, live_parity, site_probability


logger = logging.getLogger(__name__)


# --- 定数
GL_ORDER = 16               # パネルあたりの節点数
PHASE_PER_PANEL = 8.0       # 1パネル内で許す最大位相変化（ラジアン）
AMPLITUDE_TOL = 1e-8        # 振幅の絶対許容誤差
MAX_REFINEMENTS = 6         # パネル数の倍加回数の上限
POSITION_CHUNK = 64         # 一度に評価する位置の数
BREAKPOINTS = (-math.pi, -math.pi / 2, 0.0, math.pi / 2, math.pi)
BRANCHES = ("up", "down")


@dataclass(frozen=True)
class IntegrandSpec:
    """位置 x・時刻 t・成分 branch の振幅を与える被積分関数。"""

    t: int
    x: int
    branch: str

    def __post_init__(self) -> None:
        if self.branch not in BRANCHES:
            raise ValueError(f"branch は up/down のいずれかです: {self.branch}")
        if self.t < 0:
            raise ValueError(f"t は0以上である必要があります: {self.t}")
        if abs(self.x) > self.t:
            raise ValueError(f"|x| ≤ t を満たしません: x={self.x}, t={self.t}")


    @staticmethod
    def omega(k: np.ndarray) -> np.ndarray:
        """分散関係 ω_k = arcsin(sin k / √2)。"""
        return np.arcsin(np.sin(k) * SQRT_HALF)


    @property
    def degree(self) -> int:
        """被積分関数に現れる最大の波数 |x| + t。"""
        return abs(self.x) + self.t


    def evaluate(self, k: np.ndarray) -> np.ndarray:
        """節点 k での被積分関数値（1/2π を含む）。"""
        v = propagated_coin(np.asarray(k, dtype=np.float64), self.t)
        comp = v[0] if self.branch == "up" else v[1]
        return np.exp(1j * self.x * k) * comp / (2.0 * math.pi)


def propagated_coin(k: np.ndarray, t: int) -> np.ndarray:
    """M(k)^t c0 を固有分解で評価する。戻り値は形状 (2, len(k))。"""
    c = symmetric_coin()
    w = IntegrandSpec.omega(k)
    lam1 = np.exp(-1j * w)
    lam2 = -np.exp(1j * w)

    # --- M(k) c0
    em = np.exp(-1j * k) * SQRT_HALF
    ep = np.exp(1j * k) * SQRT_HALF
    mc_up = em * (c[0] + c[1])
    mc_down = ep * (c[0] - c[1])

    # --- M^t = λ1^t Π1 + λ2^t Π2, Π1 = (M - λ2)/(λ1 - λ2), Π2 = (M - λ1)/(λ2 - λ1)
    p1 = np.exp(-1j * t * w)
    p2 = (-1.0) ** t * np.exp(1j * t * w)
    denom = lam1 - lam2
    up = (p1 * (mc_up - lam2 * c[0]) - p2 * (mc_up - lam1 * c[0])) / denom
    down = (p1 * (mc_down - lam2 * c[1]) - p2 * (mc_down - lam1 * c[1])) / denom
    return np.vstack([up, down])


def _nodes(degree: int, refine: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """[-π, π] を ±π/2, 0 で分割した区分 Gauss-Legendre 節点と重み。"""
    base_x, base_w = np.polynomial.legendre.leggauss(GL_ORDER)
    quarter = BREAKPOINTS[1] - BREAKPOINTS[0]
    panels = max(1, math.ceil(degree * quarter / PHASE_PER_PANEL)) * refine
    nodes = []
    weights = []
    for a, b in zip(BREAKPOINTS[:-1], BREAKPOINTS[1:]):
        edges = np.linspace(a, b, panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (base_x + 1.0))
            weights.append(half * base_w)
    return np.concatenate(nodes), np.concatenate(weights)


def analytic_amplitude(
    x: int,
    t: int,
    branch: str,
    tol: float = AMPLITUDE_TOL,
) -> complex:
    """ψ_↑(x,t) または ψ_↓(x,t) を求積で計算する。

    パネル数を倍にしていき、変化が tol を下回った値を返す。
    """
    spec = IntegrandSpec(t=t, x=x, branch=branch)
    refine = 1
    k, w = _nodes(spec.degree, refine)
    value = complex(np.sum(w * spec.evaluate(k)))
    for _ in range(MAX_REFINEMENTS):
        refine *= 2
        k, w = _nodes(spec.degree, refine)
        new_value = complex(np.sum(w * spec.evaluate(k)))
        if abs(new_value - value) < tol:
            return new_value
        value = new_value
    logger.warning("求積が収束しませんでした: x=%d t=%d branch=%s", x, t, branch)
    return value


def analytic_distribution(t: int, *, refine: int = 1, chunk: int = POSITION_CHUNK) -> Distribution:
    """生存サイト全体の P(x,t) = |ψ_↑|² + |ψ_↓|² を求積で求める。

    パラメータ
    ----------
    t : int
        ステップ数。
    refine : int, optional
        パネル数の倍率（収束確認用）。
    chunk : int, optional
        一度に位相行列を作る位置の数。

    戻り値
    ------
    Distribution
        プロトコル quantum-1d の生存サイト分布。
    """
    if t < 0:
        raise ValueError(f"t は0以上である必要があります: {t}")
    if refine < 1:
        raise ValueError(f"refine は1以上である必要があります: {refine}")

    # --- 全位置で共通の節点と M(k)^t c0
    k, w = _nodes(2 * t, refine)
    weighted = propagated_coin(k, t) * (w / (2.0 * math.pi))

    positions = np.arange(-t, t + 1, 2, dtype=np.int64)
    probs = np.empty(positions.size, dtype=np.float64)
    for start in range(0, positions.size, chunk):
        xs = positions[start:start + chunk]
        phase = np.exp(1j * np.outer(xs, k))
        amps = phase @ weighted.T
        probs[start:start + xs.size] = site_probability(amps[:, 0], amps[:, 1])
    logger.debug("オラクル分布を計算: t=%d 節点数=%d", t, k.size)

    return Distribution(
        n_steps=t,
        positions=positions,
        probs=probs,
        parity=live_parity(t),
        protocol="quantum-1d",
    )


def compare(a: Distribution, b: Distribution, floor: float) -> float:
    """2つの分布の最大相対誤差 |Pa - Pb| / max(Pa, Pb) を返す。

    min(Pa, Pb) > floor を満たす位置だけを比較する。
    """
    if floor < 0.0:
        raise ValueError(f"floor は0以上である必要があります: {floor}")
    if a.n_steps != b.n_steps:
        raise ValueError(f"ステップ数が一致しません: {a.n_steps} != {b.n_steps}")
    if a.protocol.split("-")[-1] != b.protocol.split("-")[-1]:
        raise ValueError(f"プロトコルの次元が一致しません: {a.protocol} / {b.protocol}")
    if not np.array_equal(a.positions, b.positions):
        raise ValueError("位置グリッドが一致しません。")

    pa = a.probs
    pb = b.probs
    mask = np.minimum(pa, pb) > floor
    if not np.any(mask):
        return 0.0
    rel = np.abs(pa[mask] - pb[mask]) / np.maximum(pa[mask], pb[mask])
    return float(np.max(rel))
