# src/qwsc/walks/walk2d.py
"""2次元ウォーク（テンソル積・交互ウォーク・グローバー）の伝播エンジン。

格子配列は (コイン次元, 2n+3, 2n+3) で、添字 (i, j) が位置
(x, y) = (i - n - 1, j - n - 1) に対応する。各ステップは新しい有効領域
（半径 t+1 の正方形）全体を書き込むので、ピンポンバッファに古い値は残らない。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging

import numpy as np

from qwsc.walks.coins import (
    grover_coin,
    hadamard_coin,
    max_spread_coin,
    symmetric_coin,
    tensor_coin,
    tensor_initial_coin,
)
from qwsc.walks.distribution import Distribution2D, check_normalization, site_probability


logger = logging.getLogger(__name__)


# --- 定数
PROTOCOL_DIMS = {"tensor-2d": 4, "aqw-2d": 2, "grover-2d": 4}
DIAGONAL_SHIFTS = ((1, 1), (1, -1), (-1, 1), (-1, -1))   # 成分 c0..c3 の移動 (dx, dy)
X_SHIFTS = ((1, 0), (-1, 0))                              # 交互ウォークの x 移動（↑, ↓）
Y_SHIFTS = ((0, 1), (0, -1))                              # 交互ウォークの y 移動（↑, ↓）
EXACT_MAX_CYCLES = 12       # 2D 整数モードの上限
MAX_CYCLES = 1000           # allow_large なしで許す最大サイクル数
DEFAULT_BLOCK_ROWS = 64     # 並列化の固定行ブロック
EXACT_DIVISORS = {"tensor-2d": 4.0, "aqw-2d": 2.0, "grover-2d": 4.0}   # 4^n P = Σ|z|² / 除数


def _exact_setup(protocol: str) -> tuple[np.ndarray, np.ndarray]:
    """正規化しないコインと初期状態（整数成分）。"""
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128)
    if protocol == "tensor-2d":
        return np.kron(h, h), np.array([1.0, 1.0j, 1.0j, -1.0], dtype=np.complex128)
    if protocol == "aqw-2d":
        return h, np.array([1.0, 1.0j], dtype=np.complex128)
    coin = np.ones((4, 4), dtype=np.complex128) - 2.0 * np.eye(4, dtype=np.complex128)
    return coin, np.array([1.0, -1.0, -1.0, 1.0], dtype=np.complex128)


def _float_setup(protocol: str) -> tuple[np.ndarray, np.ndarray]:
    if protocol == "tensor-2d":
        return tensor_coin(), tensor_initial_coin()
    if protocol == "aqw-2d":
        return hadamard_coin(), symmetric_coin()
    return grover_coin(4), max_spread_coin()


@dataclass(frozen=True, eq=False)
class WalkState2D:
    """t サイクル後の振幅。amps[c, i, j] が位置 (i - t, j - t) の成分 c。"""

    t: int
    coin_dim: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.coin_dim not in (2, 4):
            raise ValueError(f"コイン次元は2か4です: {self.coin_dim}")
        amps = np.array(self.amps, dtype=np.complex128)
        size = 2 * self.t + 1
        if amps.shape != (self.coin_dim, size, size):
            raise ValueError(f"振幅配列の形状は ({self.coin_dim}, {size}, {size}) である必要があります。")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)


    @property
    def coords(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1, dtype=np.int64)


class Walk2D:
    """2D ウォークのエンジン。

    - tensor-2d: コイン U_H⊗U_H、斜め4方向の移動
    - grover-2d: コイン G4、同じ斜め4方向の移動
    - aqw-2d: 1サイクル = コイン→x 移動→コイン→y 移動（2相）

    行ブロックごとにスレッドへ割り当てる。各サイトの計算は独立なので
    結果はスレッド数によらない。
    """

    def __init__(
        self,
        protocol: str,
        n_max: int,
        *,
        threads: int = 1,
        exact: bool = False,
        block_rows: int = DEFAULT_BLOCK_ROWS,
        allow_large: bool = False,
    ) -> None:
        if protocol not in PROTOCOL_DIMS:
            raise ValueError(f"未知の2Dプロトコルです: {protocol}")
        if n_max < 0:
            raise ValueError(f"n は0以上である必要があります: {n_max}")
        if n_max > MAX_CYCLES and not allow_large:
            raise ValueError(f"2D の n は {MAX_CYCLES} までです（指定 {n_max}）。")
        if exact and n_max > EXACT_MAX_CYCLES:
            raise ValueError(f"2D 整数モードは n ≤ {EXACT_MAX_CYCLES} までです（指定 {n_max}）。")
        if threads < 1 or block_rows < 1:
            raise ValueError("スレッド数とブロック行数は1以上である必要があります。")

        self._protocol = protocol
        self._dim = PROTOCOL_DIMS[protocol]
        self._n_max = n_max
        self._offset = n_max + 1
        self._exact = exact
        self._threads = threads
        self._block_rows = block_rows
        self._executor: ThreadPoolExecutor | None = None
        self._t = 0

        coin, initial = _exact_setup(protocol) if exact else _float_setup(protocol)
        self._coin = coin

        size = 2 * n_max + 3
        shape = (self._dim, size, size)
        self._amp = np.zeros(shape, dtype=np.complex128)
        self._next = np.zeros(shape, dtype=np.complex128)
        self._mid = np.zeros(shape, dtype=np.complex128) if protocol == "aqw-2d" else None
        self._amp[:, self._offset, self._offset] = initial
        logger.debug("2D エンジン生成: %s n_max=%d exact=%s", protocol, n_max, exact)


    def __enter__(self) -> "Walk2D":
        return self


    def __exit__(self, *exc) -> None:
        self.close()


    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None


    @property
    def t(self) -> int:
        return self._t


    @property
    def protocol(self) -> str:
        return self._protocol


    def advance(self, cycles: int = 1) -> None:
        """cycles サイクル進める。"""
        if cycles < 0 or self._t + cycles > self._n_max:
            raise ValueError(
                f"サイクル数が範囲外です: t={self._t}, cycles={cycles}, n_max={self._n_max}"
            )
        for _ in range(cycles):
            r = self._t + 1
            if self._protocol == "aqw-2d":
                self._phase(self._amp, self._mid, X_SHIFTS, r, r - 1)
                self._phase(self._mid, self._next, Y_SHIFTS, r, r)
            else:
                self._phase(self._amp, self._next, DIAGONAL_SHIFTS, r, r)
            self._amp, self._next = self._next, self._amp
            self._t = r


    def _phase(
        self,
        src: np.ndarray,
        dst: np.ndarray,
        shifts: tuple[tuple[int, int], ...],
        row_radius: int,
        col_radius: int,
    ) -> None:
        """dst の半径 (row_radius, col_radius) の箱を coin·src の移動で埋める。"""
        off = self._offset
        r0, r1 = off - row_radius, off + row_radius + 1
        cols = (off - col_radius, off + col_radius + 1)
        blocks = [(i, min(i + self._block_rows, r1)) for i in range(r0, r1, self._block_rows)]
        if self._threads > 1 and len(blocks) > 1:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(max_workers=self._threads)
            list(self._executor.map(lambda b: self._apply_block(src, dst, shifts, b, cols), blocks))
        else:
            for b in blocks:
                self._apply_block(src, dst, shifts, b, cols)


    def _apply_block(
        self,
        src: np.ndarray,
        dst: np.ndarray,
        shifts: tuple[tuple[int, int], ...],
        rows: tuple[int, int],
        cols: tuple[int, int],
    ) -> None:
        (i0, i1), (j0, j1) = rows, cols
        for c, (dx, dy) in enumerate(shifts):
            out = dst[c, i0:i1, j0:j1]
            window = src[:, i0 - dx:i1 - dx, j0 - dy:j1 - dy]
            np.multiply(window[0], self._coin[c, 0], out=out)
            for d in range(1, self._dim):
                out += window[d] * self._coin[c, d]


    def _box(self) -> np.ndarray:
        t, off = self._t, self._offset
        return self._amp[:, off - t:off + t + 1, off - t:off + t + 1]


    def state(self) -> WalkState2D:
        return WalkState2D(t=self._t, coin_dim=self._dim, amps=self._box().copy())


    def distribution(self) -> Distribution2D:
        """現在の確率分布 P(x, y)（箱 [-t, t]² 全体、死にサイトは 0）。"""
        if self._exact:
            raise ValueError("整数モードでは exact_numerators() を使ってください。")
        probs = site_probability(*self._box())
        dist = Distribution2D(
            n_steps=self._t, grid_min=-self._t, probs=probs, protocol=self._protocol
        )
        check_normalization(dist.total(), self._t, self._protocol)
        return dist


    def exact_numerators(self) -> np.ndarray:
        """整数モードで 4^t·P(x, y) を (2t+1)² の整数配列で返す。"""
        if not self._exact:
            raise ValueError("exact=True で生成したエンジンでのみ使えます。")
        norm2 = site_probability(*self._box(), ordered=False)
        return np.rint(norm2 / EXACT_DIVISORS[self._protocol]).astype(np.int64)


def _run(protocol: str, n: int, threads: int, allow_large: bool) -> Distribution2D:
    with Walk2D(protocol, n, threads=threads, allow_large=allow_large) as walk:
        walk.advance(n)
        dist = walk.distribution()
    logger.info("2D ウォーク完了: %s n=%d", protocol, n)
    return dist


def tensor_walk(n: int, *, threads: int = 1, allow_large: bool = False) -> Distribution2D:
    """コイン U_H⊗U_H の4面ウォーク（2つの独立な1Dウォークの直積）。"""
    return _run("tensor-2d", n, threads, allow_large)


def aqw_walk(n: int, *, threads: int = 1, allow_large: bool = False) -> Distribution2D:
    """交互量子ウォーク。n はフルサイクル（x 移動と y 移動の組）の数。"""
    return _run("aqw-2d", n, threads, allow_large)


def grover_walk(n: int, *, threads: int = 1, allow_large: bool = False) -> Distribution2D:
    """最大拡散初期状態からのグローバーウォーク。"""
    return _run("grover-2d", n, threads, allow_large)


def exact_numerators_2d(protocol: str, n: int) -> np.ndarray:
    """4^n·P(x, y) の整数格子（行 x = -n..n, 列 y = -n..n）。"""
    with Walk2D(protocol, n, exact=True) as walk:
        walk.advance(n)
        return walk.exact_numerators()
