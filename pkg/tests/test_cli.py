import json
from pathlib import Path

import pytest

from qwsc.__main__ import build_parser, config_from_args, main
from qwsc.cli.artifacts import read_manifest
from qwsc.cli.reproduce import (
    FIGURE_ALIASES,
    TARGETS,
    check_close,
    check_equal,
    informational,
    resolve_target,
)
from qwsc.cli.run_config import RunConfig


def only_run_dir(out: Path, command: str) -> Path:
    dirs = [p for p in out.iterdir() if p.is_dir() and p.name.startswith(command + "-")]
    assert len(dirs) == 1
    return dirs[0]


def artifact_bytes(run_dir: Path) -> dict[str, bytes]:
    return {
        p.name: p.read_bytes()
        for p in sorted(run_dir.iterdir())
        if p.suffix in (".csv", ".json")
    }


# --- 再現ターゲット
def test_resolve_target():
    assert resolve_target("all") == TARGETS
    assert resolve_target("FIG14") == ("table3",)
    assert resolve_target("table5") == ("table5",)
    assert resolve_target("fig22") == ("spectrum-slices",)
    assert resolve_target("fig21") == ("spectra2d",)
    assert set(FIGURE_ALIASES.values()) <= set(TARGETS)
    with pytest.raises(ValueError):
        resolve_target("fig15")


def test_check_helpers():
    assert check_close("x", 1.04, 1.0, 0.05).passed
    assert not check_close("x", 1.06, 1.0, 0.05).passed
    assert check_close("x", 99.5, 100.0, 0.01, relative=True).passed
    assert not check_close("x", float("nan"), 1.0, 1.0).passed
    assert check_equal("row", [1, 2, 1], (1, 2, 1)).passed
    info = informational("note", 3.0).to_dict()
    assert info["pass"] is True and info["kind"] == "info"


def test_reproduce_table4(tmp_path):
    assert main(["reproduce", "table4", "--out", str(tmp_path)]) == 0
    run_dir = only_run_dir(tmp_path, "reproduce")
    report = json.loads((run_dir / "reproduce-table4.json").read_text(encoding="utf-8"))
    assert report["pass"] is True
    assert report["header"]["tool"] == "qwalk-scope"
    manifest = read_manifest(run_dir / "run.json")
    assert "reproduce-table4.json" in manifest["artifacts"]
    assert manifest["config"]["target"] == "table4"


def test_reproduce_table5_with_n(tmp_path):
    assert main(["reproduce", "table5", "--n", "7", "--out", str(tmp_path)]) == 0


def test_reproduce_dispersion(tmp_path):
    assert main(["reproduce", "fig23", "--out", str(tmp_path)]) == 0


def test_unknown_target_is_precondition_error(tmp_path, capsys):
    assert main(["reproduce", "table9", "--out", str(tmp_path)]) == 1
    error = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert error["error"] == "precondition"
    assert error["command"] == "reproduce"


def test_walk2d_size_limit(tmp_path, capsys):
    assert main(["walk2d", "--n", "1001", "--out", str(tmp_path)]) == 1
    assert "precondition" in capsys.readouterr().out


def test_walk1d_needs_single_n(tmp_path):
    assert main(["walk1d", "--out", str(tmp_path)]) == 1
    assert main(["walk1d", "--n", "4", "--n", "6", "--out", str(tmp_path)]) == 1


# --- 設定ハッシュ
def test_config_hash_ignores_threads_and_output(tmp_path):
    a = RunConfig(command="walk1d", n_values=(10,), threads=1, output_dir=tmp_path / "a")
    b = RunConfig(command="walk1d", n_values=(10,), threads=8, output_dir=tmp_path / "b")
    c = RunConfig(command="walk1d", n_values=(12,))
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != c.config_hash()
    assert "threads" not in a.canonical()


def test_config_from_args(tmp_path):
    args = build_parser().parse_args(
        ["walk1d", "--n", "20", "--checkpoints", "5", "10", "--out", str(tmp_path), "--threads", "3"]
    )
    config = config_from_args(args)
    assert config.n_values == (20,)
    assert config.checkpoints == (5, 10)
    assert config.threads == 3
    assert config.output_dir == tmp_path


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="plot")
    with pytest.raises(ValueError):
        RunConfig(command="walk1d", threads=0)
    with pytest.raises(ValueError):
        RunConfig(command="walk1d", report_format="xml")


# --- コマンド
def test_walk1d_artifacts_do_not_depend_on_threads(tmp_path):
    for name, threads in (("single", "1"), ("multi", "4")):
        argv = ["walk1d", "--n", "60", "--checkpoints", "20", "--threads", threads,
                "--out", str(tmp_path / name)]
        assert main(argv) == 0
    single = only_run_dir(tmp_path / "single", "walk1d")
    multi = only_run_dir(tmp_path / "multi", "walk1d")
    assert single.name == multi.name
    files = artifact_bytes(single)
    assert set(files) == {"quantum-1d-n20.csv", "quantum-1d-n60.csv", "run.json"}
    assert files == artifact_bytes(multi)


def test_walk1d_json_format(tmp_path):
    assert main(["walk1d", "--n", "10", "--format", "json", "--out", str(tmp_path)]) == 0
    run_dir = only_run_dir(tmp_path, "walk1d")
    assert (run_dir / "quantum-1d-n10.json").exists()


def test_analyze_input_csv(tmp_path):
    assert main(["walk1d", "--n", "50", "--out", str(tmp_path / "walk")]) == 0
    csv_path = only_run_dir(tmp_path / "walk", "walk1d") / "quantum-1d-n50.csv"
    assert main(["analyze", "--input", str(csv_path), "--out", str(tmp_path / "analyze")]) == 0
    run_dir = only_run_dir(tmp_path / "analyze", "analyze")
    report = json.loads((run_dir / "analysis-n50.json").read_text(encoding="utf-8"))
    assert report["n"] == 50
    assert report["header"]["config_hash"]


def test_analyze_missing_input(tmp_path):
    assert main(["analyze", "--input", str(tmp_path / "none.csv"), "--out", str(tmp_path)]) == 1


def test_spectrum_1d(tmp_path):
    assert main(["spectrum", "--n", "40", "--out", str(tmp_path)]) == 0
    run_dir = only_run_dir(tmp_path, "spectrum")
    stats = json.loads((run_dir / "spectrum-1d-n40-statistics.json").read_text(encoding="utf-8"))
    assert 2 * stats["peaks_half"] <= stats["peaks_total"] <= 2 * stats["peaks_half"] + 2
    assert (run_dir / "spectrum-1d-n40.csv").exists()


def test_walk2d_and_oracle(tmp_path):
    assert main(["walk2d", "--protocol", "tensor-2d", "--n", "10", "--out", str(tmp_path)]) == 0
    run_dir = only_run_dir(tmp_path, "walk2d")
    names = set(artifact_bytes(run_dir))
    assert {"tensor-2d-n10.csv", "tensor-2d-n10.json", "tensor-2d-n10-sliceA.csv"} <= names

    assert main(["oracle", "--n", "30", "--out", str(tmp_path)]) == 0
    run_dir = only_run_dir(tmp_path, "oracle")
    comparison = json.loads((run_dir / "oracle-n30-comparison.json").read_text(encoding="utf-8"))
    assert comparison["max_relative_error"] < 1e-6
