# src/qwsc/walks/edge.py
"""交互ウォークの端 x = ±N での経路計算と擬二項分布。

端に沿う1サイクルは2つの有理行列 R（y+1）と S（y-1）のどちらかで表される。
R, S は RR = RS = R/2, SR = SS = S/2 を満たすので、長さ N の経路の積は
先頭の文字だけで決まり 2^-(N-1) 倍になる。端の確率は経路数の二乗和
4^N P(y) = C(N-1, j-1)² + C(N-1, j)²（y = -N + 2j）で与えられる。
"""

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
import itertools
import logging
import math

import numpy as np

from qwsc.analysis.fitting import fit_gaussian, power_law_fit
from qwsc.analysis.reports import FitResult
from qwsc.walks.slices import extract_slice
from qwsc.walks.walk2d import aqw_walk


logger = logging.getLogger(__name__)


# --- 定数
PATH_ENUM_MAX = 12          # 経路を列挙して検算する上限
EDGE_FIT_MAX = 1000         # 端のガウスフィットに使える N の上限
MIN_DECADE_RATIO = 10.0     # 端のガウスフィットに必要な N の範囲（1桁）


def _frac_matrix(rows: list[list[int]], denom: int) -> np.ndarray:
    return np.array([[Fraction(v, denom) for v in row] for row in rows], dtype=object)


def edge_step_matrices() -> tuple[np.ndarray, np.ndarray]:
    """端の1サイクルを表す有理行列 R, S を返す。

    吸収則 RR = RS = R/2, SR = SS = S/2 を確認し、成り立たなければ
    RuntimeError を送出する。
    """
    r = _frac_matrix([[1, -1], [0, 0]], 2)
    s = _frac_matrix([[0, 0], [-1, 1]], 2)
    half = Fraction(1, 2)
    checks = {
        "RR": (r.dot(r), r * half),
        "RS": (r.dot(s), r * half),
        "SR": (s.dot(r), s * half),
        "SS": (s.dot(s), s * half),
    }
    for name, (lhs, rhs) in checks.items():
        if not np.array_equal(lhs, rhs):
            raise RuntimeError(f"吸収則 {name} が成り立ちません。")
    return r, s


def reduce_path(word: str) -> tuple[Fraction, str]:
    """R/S の文字列の積を (係数, 先頭文字) に簡約する。

    積を実際に計算し、係数 × 先頭文字の行列に一致することを確認する。
    """
    if not word or set(word) - {"R", "S"}:
        raise ValueError(f"経路は R と S からなる空でない文字列です: {word!r}")
    r, s = edge_step_matrices()
    letters = {"R": r, "S": s}
    product = letters[word[0]]
    for ch in word[1:]:
        product = product.dot(letters[ch])
    coeff = Fraction(1, 2 ** (len(word) - 1))
    if not np.array_equal(product, letters[word[0]] * coeff):
        raise RuntimeError(f"経路 {word} の積が先頭文字に簡約されません。")
    return coeff, word[0]


@dataclass(frozen=True, eq=False)
class EdgeDistribution:
    """端 x = N 上の確率。numerators[j] = 4^N·P(y = -N + 2j)。"""

    n_steps: int
    positions: np.ndarray
    numerators: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.numerators) != self.n_steps + 1:
            raise ValueError("分子の個数は N+1 である必要があります。")
        positions = np.array(self.positions, dtype=np.int64)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)


    @property
    def probs(self) -> np.ndarray:
        denom = 4**self.n_steps
        return np.array([v / denom for v in self.numerators], dtype=np.float64)


    def exact(self, y: int) -> Fraction:
        """位置 y の確率（有理数）。範囲外・死にサイトは 0。"""
        j, rem = divmod(y + self.n_steps, 2)
        if rem or not 0 <= j <= self.n_steps:
            return Fraction(0)
        return Fraction(self.numerators[j], 4**self.n_steps)


    def to_dict(self) -> dict:
        return {
            "n": self.n_steps,
            "positions": self.positions.tolist(),
            "numerators": list(self.numerators),
            "denominator_exponent": self.n_steps,
        }


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def _edge_positions(n: int) -> np.ndarray:
    return np.arange(-n, n + 1, 2, dtype=np.int64)


def edge_distribution_analytic(n: int) -> EdgeDistribution:
    """擬二項分布 4^N P(y) = C(N-1, j-1)² + C(N-1, j)² を返す。"""
    if n < 1:
        raise ValueError(f"端の分布は n ≥ 1 で定義されます: {n}")
    nums = tuple(_comb(n - 1, j - 1) ** 2 + _comb(n - 1, j) ** 2 for j in range(n + 1))
    return EdgeDistribution(n_steps=n, positions=_edge_positions(n), numerators=nums)


def edge_distribution_by_paths(n: int) -> EdgeDistribution:
    """R/S の全経路を列挙して端の分布を厳密に求める（n ≤ 12）。

    初期コイン (|↑⟩ + i|↓⟩)/√2 に対し |Mψ|² = (Σ_ij m_ij²)/2（M は実行列）。
    """
    if not 1 <= n <= PATH_ENUM_MAX:
        raise ValueError(f"経路列挙は 1 ≤ n ≤ {PATH_ENUM_MAX} の範囲のみです: {n}")
    r, s = edge_step_matrices()
    letters = {"R": r, "S": s}
    sums = {j: np.full((2, 2), Fraction(0), dtype=object) for j in range(n + 1)}
    for word in itertools.product("RS", repeat=n):
        coeff, head = reduce_path("".join(word))
        j = word.count("R")
        sums[j] = sums[j] + letters[head] * coeff

    nums = []
    for j in range(n + 1):
        prob = sum((v * v for v in sums[j].ravel()), Fraction(0)) / 2
        scaled = prob * 4**n
        if scaled.denominator != 1:
            raise RuntimeError(f"4^N P が整数になりません: n={n}, j={j}, {scaled}")
        nums.append(int(scaled))
    logger.debug("経路列挙完了: n=%d 経路数=%d", n, 2**n)
    return EdgeDistribution(n_steps=n, positions=_edge_positions(n), numerators=tuple(nums))


def pseudobinomial_triangle(n: int) -> list[list[int]]:
    """N = 0..n の擬二項分布の分子の行を返す（N = 0 は原点の [1]）。"""
    if n < 0:
        raise ValueError(f"n は0以上である必要があります: {n}")
    return [[1]] + [list(edge_distribution_analytic(k).numerators) for k in range(1, n + 1)]


def edge_matches_simulation(n: int, *, threads: int = 1) -> float:
    """交互ウォークの端の行 x = n と解析解の最大絶対誤差。"""
    simulated = extract_slice(aqw_walk(n, threads=threads), "C")
    analytic = edge_distribution_analytic(n)
    return float(np.max(np.abs(simulated.probs - analytic.probs)))


def fit_edge_gaussian(edges: Sequence[EdgeDistribution]) -> FitResult:
    """N ごとにガウスを当てはめ、σ(N) と A(N) のべき乗則を返す。

    params: sigma_exponent, sigma_prefactor, amplitude_exponent, amplitude_prefactor
    """
    ns = sorted(e.n_steps for e in edges)
    if len(ns) < 3 or ns[-1] / ns[0] < MIN_DECADE_RATIO or ns[-1] > EDGE_FIT_MAX:
        raise ValueError(
            f"N は3個以上、1桁以上の範囲、{EDGE_FIT_MAX} 以下が必要です: {ns}"
        )
    by_n = {e.n_steps: e for e in edges}
    sigmas, amps = [], []
    for n in ns:
        fit = fit_gaussian(by_n[n].positions, by_n[n].probs, spacing=2.0)
        sigmas.append(fit.params["sigma"])
        amps.append(fit.params["A"])
    sigma_law = power_law_fit(list(zip(ns, sigmas)))
    amp_law = power_law_fit(list(zip(ns, amps)))
    return FitResult(
        model="edge-gaussian",
        params={
            "sigma_exponent": sigma_law.params["exponent"],
            "sigma_prefactor": sigma_law.params["prefactor"],
            "amplitude_exponent": amp_law.params["exponent"],
            "amplitude_prefactor": amp_law.params["prefactor"],
        },
        window=(float(ns[0]), float(ns[-1])),
        residual=max(sigma_law.residual, amp_law.residual),
        series={"n": [float(n) for n in ns], "sigma": sigmas, "A": amps},
    )
