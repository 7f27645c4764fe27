# src/qwsc/cli/run_config.py
"""CLI 実行設定と設定ハッシュ。"""

from dataclasses import asdict, dataclass, field
import hashlib
from importlib import metadata
import json
import os
from pathlib import Path
import warnings


# --- 定数
TOOL_NAME = "qwalk-scope"
FALLBACK_VERSION = "0.1.0"              # 未インストール時のバージョン表記
OUTPUT_ENV = "QWSC_OUTPUT_DIR"          # 出力先を指定する環境変数
DEFAULT_OUTPUT_DIR = "runs"
COMMANDS = ("walk1d", "walk2d", "oracle", "analyze", "spectrum", "reproduce")
REPORT_FORMATS = ("csv", "json")
MAX_2D_STEPS = 1000                     # 2D の n の上限（--allow-large で解除）
HASH_EXCLUDED = ("threads", "output_dir", "verbose")   # 成果物の内容に影響しない項目


def tool_version() -> str:
    try:
        return metadata.version(TOOL_NAME)
    except metadata.PackageNotFoundError:
        return FALLBACK_VERSION


def default_output_dir() -> Path:
    """環境変数 QWSC_OUTPUT_DIR、なければ ./runs。"""
    return Path(os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT_DIR))


@dataclass(frozen=True)
class RunConfig:
    """1回の CLI 実行の設定。計算はすべて決定的なので乱数シードは持たない。"""

    command: str
    protocol: str | None = None
    n_values: tuple[int, ...] = ()
    checkpoints: tuple[int, ...] = ()
    output_dir: Path = field(default_factory=default_output_dir)
    threads: int = 1
    report_format: str = "csv"
    allow_large: bool = False
    full: bool = False
    target: str | None = None
    input_path: str | None = None
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"未知のコマンドです: {self.command}")
        if any(n < 0 for n in self.n_values):
            raise ValueError(f"n は0以上である必要があります: {list(self.n_values)}")
        if any(c < 0 for c in self.checkpoints):
            raise ValueError(f"チェックポイントは0以上である必要があります: {list(self.checkpoints)}")
        if self.threads < 1:
            raise ValueError(f"スレッド数は1以上である必要があります: {self.threads}")
        if self.report_format not in REPORT_FORMATS:
            raise ValueError(f"出力形式は csv/json のいずれかです: {self.report_format}")
        if self.command == "walk2d" and self.n_values and max(self.n_values) > MAX_2D_STEPS:
            if not self.allow_large:
                raise ValueError(
                    f"2D の n は {MAX_2D_STEPS} までです（--allow-large で解除）: {max(self.n_values)}"
                )
            warnings.warn(f"2D の n={max(self.n_values)} は卓上規模を超えています。")
        object.__setattr__(self, "output_dir", Path(self.output_dir))


    def canonical(self) -> dict:
        """ハッシュ対象の項目（スレッド数・出力先・冗長度を除く）。"""
        data = asdict(self)
        for key in HASH_EXCLUDED:
            data.pop(key)
        data["n_values"] = list(self.n_values)
        data["checkpoints"] = list(self.checkpoints)
        return data


    def config_hash(self) -> str:
        """正規化 JSON の SHA-256。"""
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
