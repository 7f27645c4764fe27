# src/qwsc/walks/coins.py
"""ウォークで使うコイン演算子と初期コイン状態を提供するモジュール。

- hadamard_coin(): 2×2 アダマールコイン U_H
- hadamard_split(): U_H = P + Q の分解（上向き行 P、下向き行 Q）
- tensor_coin(): 4×4 コイン U_H ⊗ U_H
- grover_coin(): 4×4 グローバーコイン G4 = J/2 - I
- symmetric_coin(), tensor_initial_coin(), max_spread_coin(): 初期状態
"""

import numpy as np


# --- 定数
SQRT_HALF = 1.0 / np.sqrt(2.0)   # アダマールの正規化係数
UNITARY_ATOL = 1e-12             # ユニタリ性判定の許容誤差


def hadamard_coin() -> np.ndarray:
    """2×2 アダマールコイン (1/√2)[[1, 1], [1, -1]]。"""
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) * SQRT_HALF


def hadamard_split() -> tuple[np.ndarray, np.ndarray]:
    """U_H = P + Q の分解を返す。

    P は出力を上向き成分に、Q は下向き成分に射影したもの。
    辺上の経路計算で U_H の代わりに用いる。
    """
    p = np.array([[1.0, 1.0], [0.0, 0.0]], dtype=np.complex128) * SQRT_HALF
    q = np.array([[0.0, 0.0], [1.0, -1.0]], dtype=np.complex128) * SQRT_HALF
    return p, q


def tensor_coin() -> np.ndarray:
    """4面コイン U_H ⊗ U_H。成分番号は c = 2a + b（a: x 方向, b: y 方向）。"""
    h = hadamard_coin()
    return np.kron(h, h)


def grover_coin(dim: int = 4) -> np.ndarray:
    """グローバー拡散コイン (2/d)J - I。d=4 で G4 = J/2 - I。"""
    if dim < 1:
        raise ValueError(f"コイン次元は1以上である必要があります: {dim}")
    return (2.0 / dim) * np.ones((dim, dim), dtype=np.complex128) - np.eye(dim, dtype=np.complex128)


def symmetric_coin() -> np.ndarray:
    """対称初期状態 (|↑⟩ + i|↓⟩)/√2。"""
    return np.array([1.0, 1.0j], dtype=np.complex128) * SQRT_HALF


def tensor_initial_coin() -> np.ndarray:
    """テンソル積ウォークの初期状態 (|↑⟩+i|↓⟩)⊗(|↑⟩+i|↓⟩)/2。"""
    c = symmetric_coin()
    return np.kron(c, c)


def max_spread_coin() -> np.ndarray:
    """グローバーウォークの最大拡散初期状態 (|↑⟩ - |→⟩ - |←⟩ + |↓⟩)/2。"""
    return np.array([1.0, -1.0, -1.0, 1.0], dtype=np.complex128) * 0.5


def is_unitary(matrix: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    """行列がユニタリかどうかを判定する。"""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=atol))
