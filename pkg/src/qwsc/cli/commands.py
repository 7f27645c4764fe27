# src/qwsc/cli/commands.py
"""サブコマンドの実装（walk1d / walk2d / oracle / analyze / spectrum / reproduce）。"""

import logging
from pathlib import Path

from qwsc.analysis.summary import build_analysis_report
from qwsc.cli.artifacts import ArtifactWriter
from qwsc.cli.reproduce import Reproducer
from qwsc.cli.run_config import RunConfig
from qwsc.references.oracle import analytic_distribution, compare
from qwsc.spectral.statistics import fourier_beats, fourier_peak_count
from qwsc.spectral.transform import dft, dft2d, spectrum_slice
from qwsc.walks.distribution import Distribution
from qwsc.walks.slices import extract_slice
from qwsc.walks.walk1d import evolve
from qwsc.walks.walk2d import aqw_walk, grover_walk, tensor_walk


logger = logging.getLogger(__name__)


# --- 定数
EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_TOLERANCE = 2
WALKS_2D = {"tensor-2d": tensor_walk, "aqw-2d": aqw_walk, "grover-2d": grover_walk}
ORACLE_FLOOR = 1e-12


def _single_n(config: RunConfig) -> int:
    if len(config.n_values) != 1:
        raise ValueError(f"{config.command} には --n を1つだけ指定してください。")
    return config.n_values[0]


def run_walk1d(config: RunConfig, writer: ArtifactWriter) -> int:
    """1D ウォークを進め、n と各チェックポイントの分布を書き出す。"""
    n = _single_n(config)
    checkpoints = sorted(set(config.checkpoints) | {n})
    runs = evolve(n, checkpoints, threads=config.threads)
    for t, d in runs.items():
        writer.write_distribution(d, f"quantum-1d-n{t}")
    return EXIT_OK


def run_walk2d(config: RunConfig, writer: ArtifactWriter) -> int:
    """2D ウォークの分布とスライス A/B/C を書き出す。"""
    n = _single_n(config)
    protocol = config.protocol or "aqw-2d"
    if protocol not in WALKS_2D:
        raise ValueError(f"未知の2Dプロトコルです: {protocol}")
    d = WALKS_2D[protocol](n, threads=config.threads, allow_large=config.allow_large)
    writer.write_distribution_2d(d, f"{protocol}-n{n}")
    for which in ("A", "B", "C"):
        writer.write_distribution(extract_slice(d, which), f"{protocol}-n{n}-slice{which}")
    return EXIT_OK


def run_oracle(config: RunConfig, writer: ArtifactWriter) -> int:
    """フーリエ積分による解析解を書き出し、シミュレーションとの相対誤差を記録する。"""
    n = _single_n(config)
    analytic = analytic_distribution(n)
    simulated = evolve(n, [n], threads=config.threads)[n]
    err = compare(analytic, simulated, ORACLE_FLOOR)
    writer.write_distribution(analytic, f"oracle-n{n}")
    writer.write_json(f"oracle-n{n}-comparison", {"n": n, "floor": ORACLE_FLOOR, "max_relative_error": err})
    logger.info("解析解との最大相対誤差: N=%d %.3e", n, err)
    return EXIT_OK


def _input_or_run(config: RunConfig) -> Distribution:
    if config.input_path is not None:
        return Distribution.from_csv(Path(config.input_path))
    n = _single_n(config)
    return evolve(n, [n], threads=config.threads)[n]


def run_analyze(config: RunConfig, writer: ArtifactWriter) -> int:
    """1D 分布（--input の CSV か新規計算）の解析レポートを書き出す。"""
    d = _input_or_run(config)
    writer.write_json(f"analysis-n{d.n_steps}", build_analysis_report(d))
    return EXIT_OK


def run_spectrum(config: RunConfig, writer: ArtifactWriter) -> int:
    """フーリエ成分とピーク数・ビートを書き出す。protocol が 2D なら 2D 変換。"""
    protocol = config.protocol or "quantum-1d"
    if protocol in WALKS_2D:
        n = _single_n(config)
        s2 = dft2d(WALKS_2D[protocol](n, threads=config.threads, allow_large=config.allow_large))
        writer.write_spectrum_2d(s2, f"spectrum-{protocol}-n{n}")
        for which in ("A", "B", "C"):
            writer.write_spectrum(spectrum_slice(s2, which), f"spectrum-{protocol}-n{n}-slice{which}")
        return EXIT_OK
    if protocol != "quantum-1d":
        raise ValueError(f"スペクトルに使えないプロトコルです: {protocol}")

    d = _input_or_run(config)
    s = dft(d)
    writer.write_spectrum(s, f"spectrum-1d-n{d.n_steps}")
    stats = {
        "n": d.n_steps,
        "peaks_half": fourier_peak_count(s),
        "peaks_total": fourier_peak_count(s, half=False),
    }
    try:
        stats["beats"] = fourier_beats(s).to_dict()
    except ValueError as e:
        logger.warning("フーリエ空間のビート解析を省略しました: %s", e)
        stats["beats"] = None
    writer.write_json(f"spectrum-1d-n{d.n_steps}-statistics", stats)
    return EXIT_OK


def run_reproduce(config: RunConfig, writer: ArtifactWriter) -> int:
    """再現ターゲットを実行し、1つでも不合格なら終了コード 2 を返す。"""
    if config.target is None:
        raise ValueError("再現ターゲットを指定してください。")
    reports = Reproducer(config, writer).run(config.target)
    failed = [r.target for r in reports if not r.passed]
    if failed:
        logger.warning("許容誤差を超えたターゲット: %s", ", ".join(failed))
        return EXIT_TOLERANCE
    return EXIT_OK


HANDLERS = {
    "walk1d": run_walk1d,
    "walk2d": run_walk2d,
    "oracle": run_oracle,
    "analyze": run_analyze,
    "spectrum": run_spectrum,
    "reproduce": run_reproduce,
}


def execute(config: RunConfig) -> int:
    """設定に従ってコマンドを実行し、マニフェストを書いて終了コードを返す。"""
    writer = ArtifactWriter(config)
    code = HANDLERS[config.command](config, writer)
    writer.write_manifest()
    return code
