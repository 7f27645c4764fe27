# src/qwsc/__main__.py

import argparse
import json
import logging
import sys
from collections.abc import Sequence

from qwsc.cli.commands import EXIT_PRECONDITION, execute
from qwsc.cli.run_config import REPORT_FORMATS, TOOL_NAME, RunConfig, default_output_dir, tool_version


logger = logging.getLogger(__name__)


# --- 定数
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
PROTOCOL_CHOICES = ("quantum-1d", "tensor-2d", "aqw-2d", "grover-2d")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, action="append", default=[], help="ステップ数（複数指定可）")
    sub.add_argument("--out", default=None, help="出力ディレクトリ（既定: $QWSC_OUTPUT_DIR または ./runs）")
    sub.add_argument("--threads", type=int, default=1, help="ワーカースレッド数")
    sub.add_argument("--format", choices=REPORT_FORMATS, default="csv", help="1D 分布の出力形式")
    sub.add_argument("--verbose", action="store_true", help="DEBUG ログを出す")


def build_parser() -> argparse.ArgumentParser:
    """サブコマンドごとの引数定義。"""
    parser = argparse.ArgumentParser(prog="qwalkscope", description="量子ウォークのシミュレーションと解析")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {tool_version()}")
    subs = parser.add_subparsers(dest="command", required=True)

    # --- walk1d
    p = subs.add_parser("walk1d", help="1D アダマールウォーク")
    _add_common(p)
    p.add_argument("--checkpoints", type=int, nargs="*", default=[], help="分布を書き出す途中ステップ")

    # --- walk2d
    p = subs.add_parser("walk2d", help="2D ウォーク（テンソル / AQW / グローバー）")
    _add_common(p)
    p.add_argument("--protocol", choices=PROTOCOL_CHOICES[1:], default="aqw-2d")
    p.add_argument("--allow-large", action="store_true", help="n > 1000 を許可する")

    # --- oracle
    p = subs.add_parser("oracle", help="フーリエ積分による解析解との比較")
    _add_common(p)

    # --- analyze
    p = subs.add_parser("analyze", help="1D 分布の解析レポート")
    _add_common(p)
    p.add_argument("--input", default=None, help="解析する分布 CSV（省略時は --n で計算）")

    # --- spectrum
    p = subs.add_parser("spectrum", help="確率分布のフーリエ変換")
    _add_common(p)
    p.add_argument("--protocol", choices=PROTOCOL_CHOICES, default="quantum-1d")
    p.add_argument("--input", default=None, help="変換する1D 分布 CSV")
    p.add_argument("--allow-large", action="store_true")

    # --- reproduce
    p = subs.add_parser("reproduce", help="公表値の再現チェック")
    _add_common(p)
    p.add_argument("target", help="ターゲット名（table1, fig4, all など）")
    p.add_argument("--full", action="store_true", help="N = 10^6 まで含める")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """argparse の結果を RunConfig に変換する（検証は RunConfig 側）。"""
    return RunConfig(
        command=args.command,
        protocol=getattr(args, "protocol", None),
        n_values=tuple(args.n),
        checkpoints=tuple(getattr(args, "checkpoints", ())),
        output_dir=args.out if args.out is not None else default_output_dir(),
        threads=args.threads,
        report_format=args.format,
        allow_large=getattr(args, "allow_large", False),
        full=getattr(args, "full", False),
        target=getattr(args, "target", None),
        input_path=getattr(args, "input", None),
        verbose=args.verbose,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """qwalkscope のエントリーポイント。終了コードを返す。"""
    # --- 引数の解析
    args = build_parser().parse_args(argv)

    # --- ログの設定
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT)

    # --- 実行
    try:
        config = config_from_args(args)
        return execute(config)
    except (ValueError, FileNotFoundError) as e:
        logger.error("前提条件エラー: %s", e)
        error = {"error": "precondition", "message": str(e), "command": args.command}
        print(json.dumps(error, ensure_ascii=False))
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
