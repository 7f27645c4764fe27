# src/qwsc/walks/walk1d.py
"""1次元アダマールウォークの振幅伝播エンジン。"""

from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging

import numpy as np

from qwsc.walks.coins import SQRT_HALF, symmetric_coin
from qwsc.walks.distribution import (
    Distribution,
    check_normalization,
    live_parity,
    site_probability,
)


logger = logging.getLogger(__name__)


# --- 定数
DEFAULT_BLOCK_SITES = 1 << 16   # 並列スイープ1ブロックあたりの生存サイト数
EXACT_MAX_STEPS = 48            # 整数モードで |z|² が 2^53 未満に収まる上限
PROGRESS_LOG_FRACTION = 10      # 進捗ログを出す間隔（全体の 1/10 ごと）


@dataclass(frozen=True, eq=False)
class WalkState1D:
    """t ステップ後の振幅。配列の添字 i は位置 x = i - t に対応する。"""

    t: int
    amp_up: np.ndarray
    amp_down: np.ndarray

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError(f"ステップ数は0以上である必要があります: {self.t}")
        up = np.array(self.amp_up, dtype=np.complex128)
        down = np.array(self.amp_down, dtype=np.complex128)
        size = 2 * self.t + 1
        if up.shape != (size,) or down.shape != (size,):
            raise ValueError(f"振幅配列の長さは 2t+1={size} である必要があります。")
        up.setflags(write=False)
        down.setflags(write=False)
        object.__setattr__(self, "amp_up", up)
        object.__setattr__(self, "amp_down", down)


    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1, dtype=np.int64)


def symmetric_initial() -> WalkState1D:
    """原点に局在した対称初期状態 (|↑⟩ + i|↓⟩)/√2 を返す。"""
    coin = symmetric_coin()
    return WalkState1D(t=0, amp_up=coin[:1], amp_down=coin[1:])


def step(state: WalkState1D) -> WalkState1D:
    """S·U_H を1回適用した新しい状態を返す（入力は変更しない）。"""
    t = state.t
    up = np.pad(state.amp_up, 2)
    down = np.pad(state.amp_down, 2)
    size = 2 * t + 3

    # --- 上向き成分は x+1 へ、下向き成分は x-1 へ
    new_up = (up[0:size] + down[0:size]) * SQRT_HALF
    new_down = (up[2:size + 2] - down[2:size + 2]) * SQRT_HALF
    return WalkState1D(t=t + 1, amp_up=new_up, amp_down=new_down)


def probability(state: WalkState1D) -> Distribution:
    """状態から生存サイトの確率分布 |ψ↑|² + |ψ↓|² を作る。"""
    t = state.t
    live = slice(0, 2 * t + 1, 2)
    probs = site_probability(state.amp_up[live], state.amp_down[live])
    return Distribution(
        n_steps=t,
        positions=state.positions[live],
        probs=probs,
        parity=live_parity(t),
        protocol="quantum-1d",
    )


class HadamardWalk1D:
    """ピンポンバッファで振幅を伝播させる1Dウォークエンジン。

    1回のスイープで次状態の生存サイトだけを書き換える。位置ごとに独立な
    計算なので、ブロック分割してスレッド並列にしても結果はビット単位で
    逐次実行と一致する。

    パラメータ
    ----------
    n_max : int
        進められる最大ステップ数。配列長は 2*n_max + 3。
    threads : int, optional
        スイープに使うスレッド数。
    exact : bool, optional
        True なら正規化しないコインで整数振幅を伝播させる（n_max ≤ 48）。
    initial_coin : np.ndarray | None, optional
        原点の初期コイン状態。None なら対称初期状態。
    block_sites : int, optional
        並列化の固定ブロック長。
    """

    def __init__(
        self,
        n_max: int,
        *,
        threads: int = 1,
        exact: bool = False,
        initial_coin: np.ndarray | None = None,
        block_sites: int = DEFAULT_BLOCK_SITES,
    ) -> None:
        if n_max < 0:
            raise ValueError(f"n は0以上である必要があります: {n_max}")
        if threads < 1:
            raise ValueError(f"スレッド数は1以上である必要があります: {threads}")
        if block_sites < 1:
            raise ValueError(f"ブロック長は1以上である必要があります: {block_sites}")
        if exact and n_max > EXACT_MAX_STEPS:
            raise ValueError(
                f"整数モードは n ≤ {EXACT_MAX_STEPS} までです（指定 {n_max}）。"
                " 実数モードを使ってください。"
            )

        self._n_max = n_max
        self._offset = n_max + 1
        self._exact = exact
        self._scale = 1.0 if exact else SQRT_HALF
        self._threads = threads
        self._block_sites = block_sites
        self._executor: ThreadPoolExecutor | None = None
        self._t = 0

        # --- ピンポンバッファ
        size = 2 * n_max + 3
        self._up = np.zeros(size, dtype=np.complex128)
        self._down = np.zeros(size, dtype=np.complex128)
        self._up_next = np.zeros(size, dtype=np.complex128)
        self._down_next = np.zeros(size, dtype=np.complex128)

        # --- 初期コイン状態
        if exact:
            coin = np.array([1.0, 1.0j], dtype=np.complex128)
        elif initial_coin is None:
            coin = symmetric_coin()
        else:
            coin = np.asarray(initial_coin, dtype=np.complex128).reshape(2)
        self._up[self._offset] = coin[0]
        self._down[self._offset] = coin[1]


    def __enter__(self) -> "HadamardWalk1D":
        return self


    def __exit__(self, *exc) -> None:
        self.close()


    def close(self) -> None:
        """スレッドプールを解放する。"""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None


    @property
    def t(self) -> int:
        """現在のステップ数。"""
        return self._t


    @property
    def n_max(self) -> int:
        return self._n_max


    def advance(self, steps: int = 1) -> None:
        """状態を steps ステップ進める。"""
        if steps < 0 or self._t + steps > self._n_max:
            raise ValueError(
                f"ステップ数が範囲外です: t={self._t}, steps={steps}, n_max={self._n_max}"
            )
        log_every = max(1, steps // PROGRESS_LOG_FRACTION)
        for i in range(steps):
            self._sweep()
            self._up, self._up_next = self._up_next, self._up
            self._down, self._down_next = self._down_next, self._down
            self._t += 1
            if steps >= PROGRESS_LOG_FRACTION and (i + 1) % log_every == 0:
                logger.debug("1D ウォーク進捗: t=%d / %d", self._t, self._n_max)


    def _sweep(self) -> None:
        """次ステップの生存サイト（1つおき）を融合スイープで書き込む。"""
        radius = self._t + 1
        lo = self._offset - radius
        count = radius + 1
        blocks = [
            (m0, min(m0 + self._block_sites, count))
            for m0 in range(0, count, self._block_sites)
        ]
        if self._threads > 1 and len(blocks) > 1:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(max_workers=self._threads)
            list(self._executor.map(lambda b: self._sweep_block(lo, *b), blocks))
        else:
            for m0, m1 in blocks:
                self._sweep_block(lo, m0, m1)


    def _sweep_block(self, lo: int, m0: int, m1: int) -> None:
        up, down = self._up, self._down
        d0 = lo + 2 * m0
        d1 = lo + 2 * m1
        dst = slice(d0, d1, 2)
        nu = self._up_next[dst]
        nd = self._down_next[dst]

        # --- new_up[x] = (up[x-1] + down[x-1]) s, new_down[x] = (up[x+1] - down[x+1]) s
        np.add(up[d0 - 1:d1 - 1:2], down[d0 - 1:d1 - 1:2], out=nu)
        np.subtract(up[d0 + 1:d1 + 1:2], down[d0 + 1:d1 + 1:2], out=nd)
        if self._scale != 1.0:
            np.multiply(nu, self._scale, out=nu)
            np.multiply(nd, self._scale, out=nd)


    def _live_slice(self) -> slice:
        t = self._t
        return slice(self._offset - t, self._offset + t + 1, 2)


    def state(self) -> WalkState1D:
        """現在の状態のコピーを返す。"""
        t = self._t
        window = slice(self._offset - t, self._offset + t + 1)
        return WalkState1D(t=t, amp_up=self._up[window].copy(), amp_down=self._down[window].copy())


    def distribution(self) -> Distribution:
        """現在の生存サイトの確率分布を返す。"""
        if self._exact:
            raise ValueError("整数モードでは exact_numerators() を使ってください。")
        t = self._t
        live = self._live_slice()
        probs = site_probability(self._up[live], self._down[live])
        dist = Distribution(
            n_steps=t,
            positions=np.arange(-t, t + 1, 2, dtype=np.int64),
            probs=probs,
            parity=live_parity(t),
            protocol="quantum-1d",
        )
        check_normalization(dist.total(), t, "quantum-1d")
        return dist


    def exact_numerators(self) -> list[int]:
        """整数モードで 2^t·P(x) を生存サイト順に返す。"""
        if not self._exact:
            raise ValueError("exact=True で生成したエンジンでのみ使えます。")
        live = self._live_slice()
        norm2 = site_probability(self._up[live], self._down[live], ordered=False)
        return [int(v) for v in np.rint(norm2 / 2.0).astype(np.int64)]


def evolve(
    n: int,
    checkpoints: Iterable[int],
    *,
    threads: int = 1,
    block_sites: int = DEFAULT_BLOCK_SITES,
) -> dict[int, Distribution]:
    """対称初期状態から n ステップ進め、各チェックポイントの分布を返す。

    パラメータ
    ----------
    n : int
        最終ステップ数。
    checkpoints : Iterable[int]
        分布を取り出すステップ数の集合（0 ≤ c ≤ n）。
    threads : int, optional
        スイープのスレッド数。結果はスレッド数に依存しない。

    戻り値
    ------
    dict[int, Distribution]
        チェックポイント → 生存サイトのみの分布。
    """
    if n < 0:
        raise ValueError(f"n は0以上である必要があります: {n}")
    wanted = sorted(set(int(c) for c in checkpoints))
    bad = [c for c in wanted if c < 0 or c > n]
    if bad:
        raise ValueError(f"チェックポイントが範囲 [0, {n}] の外にあります: {bad}")

    results: dict[int, Distribution] = {}
    with HadamardWalk1D(n, threads=threads, block_sites=block_sites) as walk:
        for c in wanted:
            walk.advance(c - walk.t)
            results[c] = walk.distribution()
            logger.info("チェックポイント到達: t=%d", c)
        walk.advance(n - walk.t)
    return results


def exact_numerators(n: int) -> list[int]:
    """2^n·P(x) の整数列（x = -n, -n+2, ..., n）を返す。"""
    with HadamardWalk1D(n, exact=True) as walk:
        walk.advance(n)
        return walk.exact_numerators()
