# src/qwsc/spectral/transform.py
"""確率分布の離散フーリエ変換（1D/2D）。

N ステップの分布の生存サイト x_j = -N + 2j（j = 0..N）の列 P_j に対し、
M = N + 1 点の格子 k_m = 2πm/M, m ∈ (-M/2, M/2] で

    F(k) = Σ_j P_j cos(k (j - N/2))

を求める。k は生存サイトの添字に共役な波数（物理的な波数の2倍）で、
k = π が格子で表せる最短の波長に当たる。列は単射に並ぶので
Σ_k F(k)²/M = Σ_x P(x)² が N の偶奇によらず成り立つ。FFT の位相を
e^{ikN/2} で戻して実部を取り、計算量は O(M log M)。
"""

from dataclasses import dataclass
import json
import logging
import math
from pathlib import Path

from filelock import FileLock
import numpy as np

from qwsc.walks.distribution import Distribution, Distribution2D


logger = logging.getLogger(__name__)


# --- 定数
NORMALIZATION_TOL = 1e-6    # 変換前に許す |ΣP - 1|
IMAGINARY_TOL = 1e-10       # 虚部（Σ P sin kx）の許容値
FLOAT_FORMAT = ".17g"


def grid_indices(m_size: int) -> np.ndarray:
    """m ∈ (-M/2, M/2] を昇順に並べた整数列。"""
    lo = -((m_size - 1) // 2)
    return np.arange(lo, lo + m_size, dtype=np.int64)


def k_grid(m_size: int) -> np.ndarray:
    return 2.0 * math.pi * grid_indices(m_size) / m_size


@dataclass(frozen=True, eq=False)
class Spectrum:
    """1D フーリエ成分 F(k)（虚部は検査済みで保持しない）。"""

    n_steps: int
    k_grid: np.ndarray
    components: np.ndarray
    label: str = "1d"

    def __post_init__(self) -> None:
        k = np.array(self.k_grid, dtype=np.float64)
        f = np.array(self.components, dtype=np.float64)
        if k.shape != f.shape or k.ndim != 1:
            raise ValueError("k 格子と成分の長さが一致しません。")
        k.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "k_grid", k)
        object.__setattr__(self, "components", f)


    @property
    def rescaled(self) -> np.ndarray:
        """再スケールした波数 N k / 2π。"""
        return self.n_steps * self.k_grid / (2.0 * math.pi)


    def value_at(self, k: float) -> float:
        """k に最も近い格子点の成分。"""
        return float(self.components[int(np.argmin(np.abs(self.k_grid - k)))])


    def to_csv(self, path: str | Path, header_lines: tuple[str, ...] = ()) -> None:
        """``k,F`` 行の CSV で保存する。"""
        path = Path(path)
        lines = [f"# {h}" for h in header_lines]
        lines.append(f"# spectrum,{self.label},{self.n_steps}")
        lines.append("k,F")
        for k, f in zip(self.k_grid.tolist(), self.components.tolist()):
            lines.append(f"{format(k, FLOAT_FORMAT)},{format(f, FLOAT_FORMAT)}")
        path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(path) + ".lock"):
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write("\n".join(lines) + "\n")


@dataclass(frozen=True, eq=False)
class Spectrum2D:
    """2D フーリエ成分 F(k_x, k_y)。components[i, j] が (kx[i], ky[j])。"""

    n_steps: int
    kx: np.ndarray
    ky: np.ndarray
    components: np.ndarray

    def __post_init__(self) -> None:
        comp = np.array(self.components, dtype=np.float64)
        kx = np.array(self.kx, dtype=np.float64)
        ky = np.array(self.ky, dtype=np.float64)
        if comp.shape != (kx.size, ky.size):
            raise ValueError("2D 成分の形状が k 格子と一致しません。")
        for arr in (comp, kx, ky):
            arr.setflags(write=False)
        object.__setattr__(self, "components", comp)
        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "ky", ky)


    def to_csv(self, path: str | Path, header_lines: tuple[str, ...] = ()) -> Path:
        """行優先 CSV と格子を記した JSON サイドカーを保存する。"""
        path = Path(path)
        lines = [f"# {h}" for h in header_lines]
        for row in self.components.tolist():
            lines.append(",".join(format(v, FLOAT_FORMAT) for v in row))
        sidecar = path.with_suffix(".json")
        meta = {
            "n": self.n_steps,
            "grid_size": int(self.kx.size),
            "m_min": int(grid_indices(self.kx.size)[0]),
            "m_max": int(grid_indices(self.kx.size)[-1]),
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(path) + ".lock"):
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write("\n".join(lines) + "\n")
            with open(sidecar, "w", encoding="utf-8", newline="\n") as f:
                f.write(json.dumps(meta, sort_keys=True, indent=1) + "\n")
        return sidecar


def _check_normalized(total: float) -> None:
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"分布が規格化されていません: ΣP = {total:.12g}")


def _check_imaginary(imag: np.ndarray) -> None:
    worst = float(np.max(np.abs(imag))) if imag.size else 0.0
    if worst >= IMAGINARY_TOL:
        raise ValueError(f"フーリエ成分の虚部が大きすぎます: {worst:.3e}")


def _centering_phase(m_size: int, n_steps: int) -> np.ndarray:
    """格子順の e^{i k N/2}。"""
    return np.exp(1j * k_grid(m_size) * (n_steps / 2.0))


def live_sequence(d: Distribution) -> np.ndarray:
    """生存サイト x = -N, -N+2, ..., N の確率列（長さ N + 1）。"""
    live = d.live()
    n = d.n_steps
    if live.positions.size and (live.positions.min() < -n or live.positions.max() > n):
        raise ValueError(f"生存サイトが [-{n}, {n}] の外にあります。")
    index = (live.positions + n) // 2
    return np.bincount(index, weights=live.probs, minlength=n + 1).astype(np.float64)


def dft(d: Distribution) -> Spectrum:
    """1D 分布の実フーリエ成分を M = N + 1 点の格子で求める。"""
    seq = live_sequence(d)
    _check_normalized(math.fsum(seq.tolist()))
    m_size = d.n_steps + 1
    order = grid_indices(m_size) % m_size
    values = np.fft.fft(seq)[order] * _centering_phase(m_size, d.n_steps)
    _check_imaginary(values.imag)
    return Spectrum(n_steps=d.n_steps, k_grid=k_grid(m_size), components=values.real)


def dft2d(d: Distribution2D) -> Spectrum2D:
    """2D 分布の生存副格子 (N+1)² 上の実フーリエ成分 F(k_x, k_y)。"""
    n = d.n_steps
    live = np.flatnonzero((d.coords - n) % 2 == 0)
    sub = d.probs[np.ix_(live, live)]
    _check_normalized(math.fsum(sub.ravel().tolist()))
    m_size = n + 1
    order = grid_indices(m_size) % m_size
    phase = _centering_phase(m_size, n)
    values = np.fft.fft2(sub)[np.ix_(order, order)] * np.outer(phase, phase)
    _check_imaginary(values.imag)
    grid = k_grid(m_size)
    logger.debug("2D フーリエ変換: N=%d M=%d", n, m_size)
    return Spectrum2D(n_steps=n, kx=grid, ky=grid.copy(), components=values.real)


def spectrum_slice(s: Spectrum2D, which: str) -> Spectrum:
    """2D スペクトルの断面 A = F(k_x, 0), B = F(k, k), C = F(π, k_y)。"""
    if which == "A":
        j0 = int(np.argmin(np.abs(s.ky)))
        return Spectrum(s.n_steps, s.kx, s.components[:, j0], label="A")
    if which == "B":
        return Spectrum(s.n_steps, s.kx, np.diagonal(s.components).copy(), label="B")
    if which == "C":
        i_pi = int(np.argmin(np.abs(s.kx - math.pi)))
        return Spectrum(s.n_steps, s.ky, s.components[i_pi, :], label="C")
    raise ValueError(f"未知の断面名です: {which}")
