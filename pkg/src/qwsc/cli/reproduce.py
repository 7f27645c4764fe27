# src/qwsc/cli/reproduce.py
"""公表値の再現チェック。

ターゲットごとにデータを生成し、観測値・公表値・許容誤差・合否を
JSON レポートに書き出す。1D の分布は1回のスイープで必要な N を
すべてチェックポイントとして取り出し、ターゲット間で使い回す。
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from qwsc.analysis.beats import detect_beats
from qwsc.analysis.fitting import fit_envelope_center, fit_envelope_outer, fit_tail
from qwsc.analysis.peaks import count_windows, extract_envelope, locate_xmax, total_peaks
from qwsc.analysis.scaling import reference_point_scaling, width_scalings
from qwsc.analysis.summary import BEAT_CENTER, CENTER_WINDOW, OUTER_WINDOW
from qwsc.cli import published_values as pv
from qwsc.cli.artifacts import ArtifactWriter
from qwsc.cli.run_config import RunConfig
from qwsc.references.classical import binomial_coefficient_row, binomial_distribution
from qwsc.references.oracle import analytic_distribution, compare
from qwsc.spectral.statistics import (
    fit_fourier_large_k,
    fit_fourier_small_k,
    fourier_beats,
    fit_spectrum_slice,
    fourier_peak_count,
)
from qwsc.spectral.transform import dft, dft2d, spectrum_slice
from qwsc.walks.dispersion import dispersion_grid
from qwsc.walks.distribution import Distribution, drift_tolerance
from qwsc.walks.edge import (
    edge_distribution_analytic,
    edge_distribution_by_paths,
    edge_matches_simulation,
    fit_edge_gaussian,
    pseudobinomial_triangle,
    PATH_ENUM_MAX,
)
from qwsc.walks.slices import diagonal_peak_count, extract_slice, fit_slice_family
from qwsc.walks.walk1d import evolve, exact_numerators
from qwsc.walks.walk2d import aqw_walk, exact_numerators_2d, tensor_walk


logger = logging.getLogger(__name__)


# --- 既定の N（卓上規模）
DESK_N_1D = (1000, 10000, 100000)
FULL_N_1D = DESK_N_1D + (1000000,)
DISTRIBUTION_N = (100, 1000)
DISTRIBUTION_N_2D = 100
TOTAL_PEAK_N = (100, 1000, 10000, 100000)
WIDTH_N = (1000, 3000, 10000, 30000, 100000)
FOURIER_PEAK_N = (1000, 10000)
SLICE_N = (500, 1000)
DIAGONAL_N = (250, 500, 1000)
EDGE_N = (100, 200, 400, 1000)
EDGE_SIMULATION_N = 100
SPECTRA_2D_N = 100
SPECTRUM_SLICE_N = 1000
ORACLE_N = (100, 1000)
TABLE2_WINDOW = (0.53, 0.63)        # ビート探索窓（N 単位）
GATED_PEAK_DENSITY_MIN_N = 1000     # これ未満の N のピーク密度は参考値
DISPERSION_POINTS = 32

TARGETS = (
    "distributions",
    "xmax",
    "reference-points",
    "table1",
    "total-peaks",
    "envelope-fits",
    "fourier-peaks",
    "widths",
    "fourier-fits",
    "table2",
    "table3",
    "table4",
    "slices",
    "diagonal-peaks",
    "table5",
    "edge-gaussian",
    "spectra2d",
    "spectrum-slices",
    "dispersion",
    "oracle",
)
FIGURE_ALIASES = {
    "fig4": "distributions",
    "fig5": "xmax",
    "fig6": "reference-points",
    "fig7": "distributions",
    "fig8": "distributions",
    "fig9": "total-peaks",
    "fig10": "envelope-fits",
    "fig11": "fourier-peaks",
    "fig12": "widths",
    "fig13": "fourier-fits",
    "fig14": "table3",
    "fig16": "slices",
    "fig17": "slices",
    "fig18": "slices",
    "fig19": "diagonal-peaks",
    "fig20": "edge-gaussian",
    "fig21": "spectra2d",
    "fig22": "spectrum-slices",
    "fig23": "dispersion",
}


def resolve_target(name: str) -> tuple[str, ...]:
    """ターゲット名・図番号・all を実際のターゲット列に解決する。"""
    key = name.lower()
    if key == "all":
        return TARGETS
    key = FIGURE_ALIASES.get(key, key)
    if key not in TARGETS:
        raise ValueError(f"未知の再現ターゲットです: {name}")
    return (key,)


@dataclass(frozen=True)
class Check:
    """1項目の比較結果。kind は close / equal / max / min / info。"""

    name: str
    observed: object
    expected: object
    tolerance: float | None
    passed: bool
    kind: str = "close"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "observed": _plain(self.observed),
            "expected": _plain(self.expected),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _plain(value: object) -> object:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def check_close(
    name: str,
    observed: float | None,
    expected: float,
    tolerance: float,
    *,
    relative: bool = False,
) -> Check:
    if observed is None or not math.isfinite(float(observed)):
        return Check(name, observed, expected, tolerance, False)
    limit = tolerance * abs(expected) if relative else tolerance
    return Check(name, observed, expected, tolerance, abs(float(observed) - expected) <= limit)


def check_equal(name: str, observed: object, expected: object) -> Check:
    return Check(name, observed, expected, 0.0, _plain(observed) == _plain(expected), kind="equal")


def check_at_most(name: str, observed: float, limit: float) -> Check:
    return Check(name, observed, limit, None, float(observed) <= limit, kind="max")


def check_at_least(name: str, observed: float, limit: float) -> Check:
    return Check(name, observed, limit, None, float(observed) >= limit, kind="min")


def informational(name: str, observed: object, expected: object = None) -> Check:
    return Check(name, observed, expected, None, True, kind="info")


@dataclass
class TargetReport:
    target: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }


class Reproducer:
    """再現ターゲットの実行器。1D の分布を N ごとにキャッシュする。"""

    def __init__(self, config: RunConfig, writer: ArtifactWriter) -> None:
        self._config = config
        self._writer = writer
        self._runs_1d: dict[int, Distribution] = {}


    def _n_values(self, default: Sequence[int]) -> tuple[int, ...]:
        return tuple(sorted(self._config.n_values)) if self._config.n_values else tuple(default)


    def _scale_default(self) -> tuple[int, ...]:
        return FULL_N_1D if self._config.full else DESK_N_1D


    def runs_1d(self, ns: Sequence[int]) -> dict[int, Distribution]:
        """1D ウォークの分布（足りない N はまとめて1回のスイープで計算）。"""
        missing = sorted(set(ns) - set(self._runs_1d))
        if missing:
            logger.info("1D スイープ: N=%s", missing)
            self._runs_1d.update(evolve(missing[-1], missing, threads=self._config.threads))
        return {n: self._runs_1d[n] for n in ns}


    def run(self, target: str) -> list[TargetReport]:
        reports = []
        for name in resolve_target(target):
            logger.info("再現ターゲット開始: %s", name)
            report = TargetReport(target=name)
            getattr(self, "_target_" + name.replace("-", "_"))(report)
            self._writer.write_json(f"reproduce-{name}", report.to_dict())
            level = logging.INFO if report.passed else logging.WARNING
            logger.log(level, "再現ターゲット %s: %s", name, "合格" if report.passed else "不合格")
            reports.append(report)
        return reports


    # --- 1D 実空間
    def _target_distributions(self, report: TargetReport) -> None:
        ns = self._n_values(DISTRIBUTION_N)
        for n, d in self.runs_1d(ns).items():
            self._writer.write_distribution(d, f"quantum-1d-n{n}")
            self._writer.write_distribution(binomial_distribution(n), f"classical-1d-n{n}")
            report.checks.append(
                check_at_most(f"N={n} |ΣP-1|", abs(d.total() - 1.0), drift_tolerance(n))
            )
        n2 = DISTRIBUTION_N_2D
        for label, walk in (("tensor-2d", tensor_walk), ("aqw-2d", aqw_walk)):
            d2 = walk(n2, threads=self._config.threads)
            self._writer.write_distribution_2d(d2, f"{label}-n{n2}")
            report.checks.append(
                check_at_most(f"{label} N={n2} |ΣP-1|", abs(d2.total() - 1.0), drift_tolerance(n2))
            )


    def _target_xmax(self, report: TargetReport) -> None:
        ns = self._n_values(self._scale_default())
        for n, d in self.runs_1d(ns).items():
            x_max, p_max = locate_xmax(d)
            report.data[str(n)] = {"x_max": x_max, "p_max": p_max}
            report.checks.append(
                check_close(f"N={n} x_max/N", x_max / n, pv.X_MAX_RATIO, pv.X_MAX_RATIO_TOL)
            )
            if n in pv.X_MAX_EXACT:
                report.checks.append(check_equal(f"N={n} x_max", x_max, pv.X_MAX_EXACT[n]))


    def _target_reference_points(self, report: TargetReport) -> None:
        runs = self.runs_1d(self._n_values(self._scale_default()))
        scaling = reference_point_scaling(runs)
        xm = scaling["x_max"]
        report.checks.append(
            check_close("P(x_max) 指数", xm.params["exponent"], pv.P_XMAX_EXPONENT, pv.EXPONENT_TOL)
        )
        report.checks.append(
            check_close(
                "P(x_max) 係数", xm.params["prefactor"], pv.P_XMAX_PREFACTOR, pv.RELATIVE_TOL,
                relative=True,
            )
        )
        for name in ("origin", "quarter", "half"):
            report.checks.append(
                check_close(
                    f"P({name}) 指数", scaling[name].params["exponent"], pv.CENTRAL_EXPONENT,
                    pv.EXPONENT_TOL,
                )
            )
        report.checks.append(
            check_close(
                "P(N/√2)/P(x_max)", scaling["ballistic_ratio"], pv.BALLISTIC_RATIO, pv.RELATIVE_TOL,
                relative=True,
            )
        )
        report.checks.append(
            informational(
                "P(N/√2)/P(x_max) 最大 N", scaling["ballistic_ratio_largest_n"], pv.BALLISTIC_RATIO
            )
        )
        report.data = {
            k: (v.to_dict() if hasattr(v, "to_dict") else v) for k, v in scaling.items()
        }


    def _target_table1(self, report: TargetReport) -> None:
        wanted = set(self._n_values(sorted({row[0] for row in pv.TABLE1_ROWS})))
        rows = [row for row in pv.TABLE1_ROWS if row[0] in wanted]
        runs = self.runs_1d(sorted({row[0] for row in rows}))
        for n, windows, counts in rows:
            observed = []
            for window, expected, peaks in zip(windows, counts, count_windows(runs[n], windows)):
                count = peaks.count
                observed.append(count)
                name = f"N={n} [{window[0]},{window[1]}]"
                if (n, window) in pv.TABLE1_INFORMATIONAL:
                    report.checks.append(informational(name, count, expected))
                else:
                    report.checks.append(
                        check_close(name, count, expected, pv.TABLE1_TOLERANCE[n])
                    )
            report.data.setdefault(str(n), []).append(
                {"windows": [list(w) for w in windows], "counts": observed}
            )


    def _target_total_peaks(self, report: TargetReport) -> None:
        for n, d in self.runs_1d(self._n_values(TOTAL_PEAK_N)).items():
            count = total_peaks(d)
            report.data[str(n)] = count
            name = f"N={n} 総ピーク数/N"
            if n >= GATED_PEAK_DENSITY_MIN_N:
                report.checks.append(
                    check_close(name, count / n, pv.TOTAL_PEAK_DENSITY, pv.TOTAL_PEAK_DENSITY_TOL)
                )
            else:
                report.checks.append(informational(name, count / n, pv.TOTAL_PEAK_DENSITY))


    def _target_envelope_fits(self, report: TargetReport) -> None:
        default = (1000000,) if self._config.full else (100000,)
        for n, d in self.runs_1d(self._n_values(default)).items():
            outer_env = extract_envelope(
                d, "upper", (int(OUTER_WINDOW[0] * n), int(OUTER_WINDOW[1] * n))
            )
            center_env = extract_envelope(d, "upper", (0, int(CENTER_WINDOW[1] * n)))
            outer = fit_envelope_outer(outer_env, n)
            center = fit_envelope_center(center_env, n)
            tail = fit_tail(d, n)
            report.checks.append(
                check_close(f"N={n} 外側 c", outer.params["c"], pv.OUTER_C, pv.EXPONENT_TOL)
            )
            report.checks.append(
                check_close(f"N={n} 中心 c'", center.params["c"], pv.CENTER_C, pv.CENTER_C_TOL)
            )
            report.checks.append(
                check_close(f"N={n} 裾 d", tail.params["d"], pv.TAIL_D, pv.RELATIVE_TOL, relative=True)
            )
            report.data[str(n)] = {
                "outer": outer.to_dict(), "center": center.to_dict(), "tail": tail.to_dict()
            }


    def _target_widths(self, report: TargetReport) -> None:
        fits = width_scalings(self.runs_1d(self._n_values(WIDTH_N)))
        for key, expected in pv.WIDTH_EXPONENTS.items():
            report.checks.append(
                check_close(f"{key} 指数", fits[key].params["exponent"], expected, pv.EXPONENT_TOL)
            )
        report.data = {k: v.to_dict() for k, v in fits.items()}


    def _target_table2(self, report: TargetReport) -> None:
        runs = self.runs_1d(self._n_values(sorted(pv.TABLE2)))
        for n, d in runs.items():
            window = (int(TABLE2_WINDOW[0] * n), int(TABLE2_WINDOW[1] * n))
            beats = detect_beats(d, window)
            seg = beats.containing(BEAT_CENTER * n)
            report.data[str(n)] = beats.to_dict()
            if n not in pv.TABLE2:
                continue
            lo, hi, width, peaks = pv.TABLE2[n]
            w_tol, p_tol = pv.TABLE2_TOLERANCE[n]
            if seg is None:
                report.checks.append(Check(f"N={n} ビート", None, [lo, hi], None, False))
                continue
            report.checks.append(informational(f"N={n} 区間", [seg.lo, seg.hi], [lo, hi]))
            report.checks.append(check_close(f"N={n} 幅", seg.width, width, w_tol))
            report.checks.append(check_close(f"N={n} ピーク数", seg.peak_count, peaks, p_tol))


    # --- 1D フーリエ空間
    def _target_fourier_peaks(self, report: TargetReport) -> None:
        for n, d in self.runs_1d(self._n_values(FOURIER_PEAK_N)).items():
            s = dft(d)
            self._writer.write_spectrum(s, f"spectrum-1d-n{n}")
            half = fourier_peak_count(s)
            report.data[str(n)] = {"half": half, "total": fourier_peak_count(s, half=False)}
            report.checks.append(
                check_close(
                    f"N={n} 片側ピーク数/N", half / n, pv.FOURIER_HALF_DENSITY,
                    pv.FOURIER_HALF_DENSITY_TOL,
                )
            )


    def _target_fourier_fits(self, report: TargetReport) -> None:
        spectra = [dft(d) for d in self.runs_1d(self._n_values(DESK_N_1D)).values()]
        small = fit_fourier_small_k(spectra)
        large = fit_fourier_large_k(spectra)
        report.checks.append(
            check_close("小さい k の c", small.params["c"], pv.FOURIER_SMALL_C, pv.EXPONENT_TOL)
        )
        report.checks.append(
            check_close("大きい k の c'", large.params["c"], pv.FOURIER_LARGE_C, pv.FOURIER_LARGE_C_TOL)
        )
        for label, fit in (("小さい k", small), ("大きい k", large)):
            report.checks.append(
                check_close(
                    f"{label} の振幅指数", fit.params["amplitude_exponent"],
                    pv.FOURIER_AMPLITUDE_EXPONENT, pv.EXPONENT_TOL,
                )
            )
        report.data = {"small_k": small.to_dict(), "large_k": large.to_dict()}


    def _target_table3(self, report: TargetReport) -> None:
        for n, d in self.runs_1d(self._n_values(sorted(pv.TABLE3))).items():
            s = dft(d)
            total = fourier_peak_count(s, half=False)
            beats = fourier_beats(s)
            last = beats.segments[-1] if beats.segments else None
            report.data[str(n)] = {"total": total, "beats": beats.to_dict()}
            if n not in pv.TABLE3:
                continue
            exp_total, exp_peaks, exp_len = pv.TABLE3[n]
            gated = n in pv.TABLE3_GATED
            len_tol, peak_tol = pv.TABLE3_TOLERANCE
            observed = {
                "全ピーク数": (total, exp_total, max(1.0, pv.TABLE3_TOTAL_RELATIVE * exp_total)),
                "最後のビートの長さ": (None if last is None else last.width, exp_len, len_tol),
                "最後のビートのピーク数": (None if last is None else last.peak_count, exp_peaks, peak_tol),
            }
            for label, (obs, exp, tol) in observed.items():
                name = f"N={n} {label}"
                if gated:
                    report.checks.append(check_close(name, obs, exp, tol))
                else:
                    report.checks.append(informational(name, obs, exp))


    # --- 2D
    def _target_table4(self, report: TargetReport) -> None:
        n = 6
        one_d = exact_numerators(n)
        report.checks.append(check_equal("1D 64P", one_d, list(pv.ONE_D_ROW_6)))
        for protocol, table in (
            ("tensor-2d", pv.TABLE4_TENSOR),
            ("aqw-2d", pv.TABLE4_AQW),
            ("grover-2d", pv.TABLE4_AQW),
        ):
            grid = exact_numerators_2d(protocol, n)[::2, ::2]
            # 期待値の表は行 y = 6..-6、列 x = -6..6。grid は [x, y]。
            observed = grid.T[::-1].tolist()
            report.checks.append(
                check_equal(f"{protocol} 4096P", observed, [list(row) for row in table])
            )
            report.data[protocol] = observed


    def _target_slices(self, report: TargetReport) -> None:
        ns = self._n_values(SLICE_N)
        families: dict[str, dict[int, Distribution]] = {k: {} for k in pv.SLICE_EXPONENTS}
        runs = self.runs_1d(ns)
        for n in ns:
            tensor = tensor_walk(n, threads=self._config.threads)
            a1 = extract_slice(tensor, "A")
            families["A1"][n] = a1
            families["B1"][n] = extract_slice(tensor, "B")
            c1 = extract_slice(tensor, "C")
            p1 = runs[n]
            diff = float(np.max(np.abs(a1.probs - p1.probs * p1.value_at(n % 2))))
            report.checks.append(check_at_most(f"N={n} P(x,0) = P(x)P(0)", diff, pv.FACTORIZATION_TOL))
            del tensor

            aqw = aqw_walk(n, threads=self._config.threads)
            families["A2"][n] = extract_slice(aqw, "A")
            families["B2"][n] = extract_slice(aqw, "B")
            c2 = extract_slice(aqw, "C")
            del aqw
            for tag, s in (
                ("A1", families["A1"][n]), ("B1", families["B1"][n]), ("C1", c1),
                ("A2", families["A2"][n]), ("B2", families["B2"][n]), ("C2", c2),
            ):
                self._writer.write_distribution(s, f"slice-{tag}-n{n}")

        for which, (expected, tol) in pv.SLICE_EXPONENTS.items():
            fit = fit_slice_family(families[which], which)
            report.checks.append(check_close(f"{which} c", fit.params["c"], expected, tol))
            report.checks.append(informational(f"{which} c+d", fit.params["c_plus_d"], 2.0))
            report.data[which] = fit.to_dict()


    def _target_diagonal_peaks(self, report: TargetReport) -> None:
        for n in self._n_values(DIAGONAL_N):
            count = diagonal_peak_count(aqw_walk(n, threads=self._config.threads))
            report.data[str(n)] = count
            report.checks.append(
                check_close(
                    f"N={n} 対角ピーク数/N", count / n if n else 0.0, pv.DIAGONAL_PEAK_DENSITY,
                    pv.DIAGONAL_PEAK_DENSITY_TOL,
                )
            )


    def _target_table5(self, report: TargetReport) -> None:
        n = self._n_values((len(pv.TABLE5_PSEUDOBINOMIAL) - 1,))[-1]
        triangle = pseudobinomial_triangle(n)
        binomial = [binomial_coefficient_row(k) for k in range(min(n, len(pv.TABLE5_BINOMIAL) - 1) + 1)]
        for k, row in enumerate(triangle):
            if k < len(pv.TABLE5_PSEUDOBINOMIAL):
                report.checks.append(
                    check_equal(f"擬二項 N={k}", row, list(pv.TABLE5_PSEUDOBINOMIAL[k]))
                )
                report.checks.append(
                    check_equal(f"二項 N={k}", binomial[k], list(pv.TABLE5_BINOMIAL[k]))
                )
        if 1 <= n <= PATH_ENUM_MAX:
            by_paths = list(edge_distribution_by_paths(n).numerators)
            report.checks.append(check_equal(f"経路列挙 N={n}", by_paths, triangle[n]))
        edge4 = edge_distribution_analytic(4)
        for y, expected in pv.EDGE_N4.items():
            report.checks.append(check_equal(f"N=4 256P(y={y})", int(edge4.exact(y) * 256), expected))
        report.data = {"pseudobinomial": triangle, "binomial": binomial}


    def _target_edge_gaussian(self, report: TargetReport) -> None:
        ns = self._n_values(EDGE_N)
        fit = fit_edge_gaussian([edge_distribution_analytic(n) for n in ns])
        for n, sigma in zip(fit.series["n"], fit.series["sigma"]):
            report.checks.append(
                check_close(
                    f"N={int(n)} σ", sigma, math.sqrt(n / 2.0), pv.EDGE_SIGMA_RELATIVE_TOL,
                    relative=True,
                )
            )
        report.checks.append(
            check_close(
                "A の指数", fit.params["amplitude_exponent"], pv.EDGE_AMPLITUDE_EXPONENT,
                pv.EXPONENT_TOL,
            )
        )
        deviation = edge_matches_simulation(EDGE_SIMULATION_N, threads=self._config.threads)
        report.checks.append(
            check_at_most(f"N={EDGE_SIMULATION_N} 端の解析解との差", deviation, pv.EDGE_MATCH_TOL)
        )
        report.data = fit.to_dict()


    def _target_spectra2d(self, report: TargetReport) -> None:
        n = self._n_values((SPECTRA_2D_N,))[0]
        f1 = dft(self.runs_1d([n])[n])
        tensor = dft2d(tensor_walk(n, threads=self._config.threads))
        self._writer.write_spectrum_2d(tensor, f"spectrum-tensor-2d-n{n}")
        product = np.outer(f1.components, f1.components)
        report.checks.append(
            check_at_most(
                "F(kx,ky) = F(kx)F(ky)",
                float(np.max(np.abs(tensor.components - product))),
                pv.SPECTRUM_FACTORIZATION_TOL,
            )
        )
        b1 = spectrum_slice(tensor, "B")
        report.checks.append(
            check_at_most(
                "B1 = F²",
                float(np.max(np.abs(b1.components - f1.components**2))),
                pv.SPECTRUM_FACTORIZATION_TOL,
            )
        )
        a1 = spectrum_slice(tensor, "A")
        c1 = spectrum_slice(tensor, "C")
        scale = c1.components[int(np.argmax(np.abs(a1.components)))] / a1.components.max()
        report.checks.append(
            check_at_most(
                "C1 ∝ A1",
                float(np.max(np.abs(c1.components - scale * a1.components))),
                pv.SPECTRUM_FACTORIZATION_TOL,
            )
        )

        aqw = dft2d(aqw_walk(n, threads=self._config.threads))
        self._writer.write_spectrum_2d(aqw, f"spectrum-aqw-2d-n{n}")
        a2 = spectrum_slice(aqw, "A")
        report.checks.append(informational("A2 の最小成分", float(a2.components.min()), 0.0))
        for tag, s in (("A1", a1), ("B1", b1), ("C1", c1), ("A2", a2),
                       ("B2", spectrum_slice(aqw, "B")), ("C2", spectrum_slice(aqw, "C"))):
            self._writer.write_spectrum(s, f"spectrum-slice-{tag}-n{n}")


    def _target_spectrum_slices(self, report: TargetReport) -> None:
        n = self._n_values((SPECTRUM_SLICE_N,))[-1]
        tensor = dft2d(tensor_walk(n, threads=self._config.threads))
        aqw = dft2d(aqw_walk(n, threads=self._config.threads))
        slices = {
            "A1": spectrum_slice(tensor, "A"),
            "B1": spectrum_slice(tensor, "B"),
            "A2": spectrum_slice(aqw, "A"),
            "B2": spectrum_slice(aqw, "B"),
        }
        del tensor, aqw
        for tag, s in slices.items():
            for region in ("small", "large"):
                fit = fit_spectrum_slice(s, region)
                report.data[f"{tag}-{region}"] = fit.to_dict()
                name = f"N={n} {tag} {region} c"
                if (tag, region) in pv.SPECTRUM_SLICE_EXPONENTS:
                    expected, tol = pv.SPECTRUM_SLICE_EXPONENTS[(tag, region)]
                    report.checks.append(check_close(name, fit.params["c"], expected, tol))
                else:
                    report.checks.append(informational(name, fit.params["c"]))


    def _target_dispersion(self, report: TargetReport) -> None:
        summary = dispersion_grid(DISPERSION_POINTS)
        report.checks.append(
            check_at_most("閉形式との差", summary["max_closed_form_deviation"], pv.DISPERSION_TOL)
        )
        report.checks.append(
            check_at_most("|λ| - 1", summary["max_unitarity_error"], pv.UNITARITY_TOL)
        )
        report.checks.append(
            informational("記載式 π ∓ (cos k1 + cos k2)/2 との差", summary["max_printed_form_deviation"])
        )
        report.data = summary


    def _target_oracle(self, report: TargetReport) -> None:
        for n, d in self.runs_1d(self._n_values(ORACLE_N)).items():
            err = compare(analytic_distribution(n), d, pv.ORACLE_FLOOR)
            report.data[str(n)] = err
            report.checks.append(
                check_at_most(f"N={n} 最大相対誤差", err, pv.ORACLE_MAX_RELATIVE_ERROR)
            )
