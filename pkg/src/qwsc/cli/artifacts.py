# src/qwsc/cli/artifacts.py
"""実行成果物（CSV/JSON）と run.json マニフェストの書き出し。"""

import json
import logging
from pathlib import Path

from filelock import FileLock

from qwsc.cli.run_config import TOOL_NAME, RunConfig, tool_version
from qwsc.spectral.transform import Spectrum, Spectrum2D
from qwsc.walks.distribution import Distribution, Distribution2D


logger = logging.getLogger(__name__)


# --- 定数
MANIFEST_NAME = "run.json"
HASH_PREFIX_LEN = 12        # 実行ディレクトリ名に使うハッシュの桁数


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


class ArtifactWriter:
    """1回の実行の成果物を ``<output>/<command>-<hash>/`` に書き出す。

    すべてのファイルの先頭にツール名・バージョン・設定ハッシュを記録する。
    同じ設定なら（スレッド数によらず）同じバイト列になる。
    """

    def __init__(self, config: RunConfig) -> None:
        self._config = config
        self._hash = config.config_hash()
        self._version = tool_version()
        self._root = config.output_dir / f"{config.command}-{self._hash[:HASH_PREFIX_LEN]}"
        self._written: list[str] = []


    @property
    def root(self) -> Path:
        return self._root


    @property
    def written(self) -> tuple[str, ...]:
        return tuple(self._written)


    def header_lines(self, protocol: str | None = None) -> tuple[str, ...]:
        lines = [f"{TOOL_NAME} {self._version}", f"config_hash {self._hash}"]
        if protocol is not None:
            lines.append(f"protocol {protocol}")
        return tuple(lines)


    def _record(self, path: Path) -> Path:
        self._written.append(path.relative_to(self._root).as_posix())
        logger.info("成果物を書き出しました: %s", path)
        return path


    def write_distribution(self, d: Distribution, name: str) -> Path:
        """1D 分布を設定の出力形式（csv/json）で保存する。"""
        if self._config.report_format == "json":
            path = self._root / f"{name}.json"
            d.to_json(path, provenance=self._provenance())
        else:
            path = self._root / f"{name}.csv"
            d.to_csv(path, self.header_lines(d.protocol))
        return self._record(path)


    def write_distribution_2d(self, d: Distribution2D, name: str) -> Path:
        path = self._root / f"{name}.csv"
        sidecar = d.to_csv(path, self.header_lines(d.protocol))
        self._record(path)
        return self._record(sidecar)


    def write_spectrum(self, s: Spectrum, name: str) -> Path:
        path = self._root / f"{name}.csv"
        s.to_csv(path, self.header_lines())
        return self._record(path)


    def write_spectrum_2d(self, s: Spectrum2D, name: str) -> Path:
        path = self._root / f"{name}.csv"
        sidecar = s.to_csv(path, self.header_lines())
        self._record(path)
        return self._record(sidecar)


    def _provenance(self) -> dict[str, str]:
        return {"tool": TOOL_NAME, "version": self._version, "config_hash": self._hash}


    def write_json(self, name: str, payload: dict) -> Path:
        """解析レポートなどの JSON を保存する。"""
        path = self._root / f"{name}.json"
        body = {"header": self._provenance(), **payload}
        self._write_locked(path, _dump(body))
        return self._record(path)


    def _write_locked(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(path) + ".lock"):
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)


    def write_manifest(self) -> Path:
        """run.json（バージョン・設定・ハッシュ・成果物一覧）を書く。"""
        path = self._root / MANIFEST_NAME
        manifest = {
            "tool": TOOL_NAME,
            "version": self._version,
            "config": self._config.canonical(),
            "config_hash": self._hash,
            "artifacts": sorted(self._written),
        }
        self._write_locked(path, _dump(manifest))
        logger.info("マニフェストを書き出しました: %s", path)
        return path


def read_manifest(path: str | Path) -> dict:
    """run.json をロックを取って読む。"""
    path = Path(path)
    with FileLock(str(path) + ".lock"):
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
