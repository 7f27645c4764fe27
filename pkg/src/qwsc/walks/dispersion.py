# src/qwsc/walks/dispersion.py
"""グローバーウォークの運動量空間での固有値（分散関係）。

U(k) = D(k)·G4、D(k) = diag(e^{i(k1+k2)}, e^{i(k1-k2)}, e^{-i(k1-k2)}, e^{-i(k1+k2)})。
固有値は ±1 と λ² + 2 cos k1 cos k2 λ + 1 = 0 の2根で、
ω^{2±} = π ± arccos(cos k1 cos k2) となる。
"""

from dataclasses import dataclass
import itertools
import logging
import math

import numpy as np

from qwsc.walks.coins import grover_coin


logger = logging.getLogger(__name__)


# --- 定数
DEFAULT_GRID = 32           # dispersion_grid の1軸あたりの点数
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DispersionPoint:
    """1つの (k1, k2) での4固有値と ω。

    eigenvalues / omegas は λ^{1+}, λ^{1-}, λ^{2+}, λ^{2-} の順。
    closed_form_deviation は数値固有値と閉形式の最大差、
    printed_form_deviation は ω^{2±} = π ∓ (cos k1 + cos k2)/2 との最大差。
    """

    k1: float
    k2: float
    eigenvalues: tuple[complex, complex, complex, complex]
    omegas: tuple[float, float, float, float]
    closed_form_deviation: float
    printed_form_deviation: float

    @property
    def unitarity_error(self) -> float:
        return max(abs(abs(lam) - 1.0) for lam in self.eigenvalues)


    def to_dict(self) -> dict:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "eigenvalues": [[lam.real, lam.imag] for lam in self.eigenvalues],
            "omegas": list(self.omegas),
            "closed_form_deviation": self.closed_form_deviation,
            "printed_form_deviation": self.printed_form_deviation,
        }


def momentum_operator(k1: float, k2: float) -> np.ndarray:
    """運動量空間のグローバー演算子 D(k)·G4。"""
    phases = np.exp(1j * np.array([k1 + k2, k1 - k2, -(k1 - k2), -(k1 + k2)]))
    return phases[:, None] * grover_coin(4)


def _closed_form(k1: float, k2: float) -> tuple[np.ndarray, np.ndarray]:
    c = math.cos(k1) * math.cos(k2)
    theta = math.acos(max(-1.0, min(1.0, c)))
    omegas = np.array([0.0, math.pi, math.pi + theta, math.pi - theta]) % TWO_PI
    return np.exp(1j * omegas), omegas


def _circular_gap(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def grover_dispersion(k1: float, k2: float) -> DispersionPoint:
    """(k1, k2) ∈ (-π, π]² の固有値を数値計算し、閉形式と対応付ける。"""
    for k in (k1, k2):
        if not -math.pi < k <= math.pi:
            raise ValueError(f"波数は (-π, π] の範囲である必要があります: {k}")
    try:
        numeric = np.linalg.eigvals(momentum_operator(k1, k2))
    except np.linalg.LinAlgError as e:
        raise RuntimeError(f"固有値計算に失敗しました: k=({k1}, {k2})") from e

    expected, omegas = _closed_form(k1, k2)
    best_perm, best_dev = None, math.inf
    for perm in itertools.permutations(range(4)):
        dev = float(np.max(np.abs(numeric[list(perm)] - expected)))
        if dev < best_dev:
            best_perm, best_dev = perm, dev
    matched = numeric[list(best_perm)]

    printed = (
        math.pi - 0.5 * (math.cos(k1) + math.cos(k2)),
        math.pi + 0.5 * (math.cos(k1) + math.cos(k2)),
    )
    measured = (omegas[2], omegas[3])
    printed_dev = min(
        max(_circular_gap(measured[0], printed[0]), _circular_gap(measured[1], printed[1])),
        max(_circular_gap(measured[0], printed[1]), _circular_gap(measured[1], printed[0])),
    )
    return DispersionPoint(
        k1=float(k1),
        k2=float(k2),
        eigenvalues=tuple(complex(v) for v in matched),
        omegas=tuple(float(w) for w in omegas),
        closed_form_deviation=best_dev,
        printed_form_deviation=float(printed_dev),
    )


def dispersion_grid(points: int = DEFAULT_GRID) -> dict[str, float]:
    """(-π, π]² の points × points 格子での最大偏差をまとめる。"""
    if points < 1:
        raise ValueError(f"格子点数は1以上である必要があります: {points}")
    ks = [-math.pi + TWO_PI * (m + 1) / points for m in range(points)]
    closed = printed = unitarity = 0.0
    for k1 in ks:
        for k2 in ks:
            p = grover_dispersion(k1, k2)
            closed = max(closed, p.closed_form_deviation)
            printed = max(printed, p.printed_form_deviation)
            unitarity = max(unitarity, p.unitarity_error)
    logger.info(
        "分散関係グリッド %d×%d: 閉形式との差 %.2e, 記載式との差 %.3f",
        points, points, closed, printed,
    )
    return {
        "grid_points": float(points),
        "max_closed_form_deviation": closed,
        "max_printed_form_deviation": printed,
        "max_unitarity_error": unitarity,
    }
