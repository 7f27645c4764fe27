from pathlib import Path

import logging

from qwsc.cli.artifacts import ArtifactWriter
from qwsc.cli.reproduce import Reproducer
from qwsc.cli.run_config import RunConfig


# --- 定数
SCRIPT_DIR = Path(__file__).resolve().parent
RUNS_DIR = SCRIPT_DIR.parent / "runs"
FULL_SCALE_TARGETS = ("xmax", "reference-points", "envelope-fits")   # N = 10^6 を使うターゲット
logger = logging.getLogger(__name__)


def main(
    *,
    threads: int = 8,                   # スイープのスレッド数
    out_dir: Path = RUNS_DIR,           # 出力先
) -> bool:
    """N = 10^6 までの1Dスイープを1回だけ走らせ、全規模ターゲットを検証する。戻り値は全合格か。"""

    # --- 設定（ターゲット間で同じ Reproducer を使い、1D 分布を共有する）
    config = RunConfig(command="reproduce", target="full-scale", full=True, threads=threads, output_dir=out_dir)
    writer = ArtifactWriter(config)
    reproducer = Reproducer(config, writer)

    # --- 各ターゲットの実行
    passed = True
    for target in FULL_SCALE_TARGETS:
        for report in reproducer.run(target):
            passed = passed and report.passed

    # --- マニフェスト
    writer.write_manifest()
    logger.info("全規模スイープ完了: %s（%s）", "合格" if passed else "不合格", writer.root)
    return passed


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s] %(message)s")
    raise SystemExit(0 if main() else 2)
