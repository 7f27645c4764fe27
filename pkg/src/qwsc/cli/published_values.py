# src/qwsc/cli/published_values.py
"""再現チェックで比較する公表値と許容誤差。"""

import math


# --- table1: 幅100の窓ごとのピーク数（N → [(窓, 個数)]）
TABLE1_ROWS = (
    (1000, ((0, 100), (100, 200), (200, 300), (300, 400), (400, 500), (500, 600), (600, 700)),
     (2, 5, 8, 12, 17, 23, 17)),
    (10000, ((500, 600), (1500, 1600), (2500, 2600), (3500, 3600), (4500, 4600), (5500, 5600),
             (6500, 6600)),
     (2, 5, 8, 12, 17, 23, 17)),
    (100000, ((500, 600), (15500, 15600), (25500, 25600), (35500, 35600), (45500, 45600),
              (55500, 55600), (65500, 65600)),
     (2, 5, 8, 12, 17, 23, 16)),
    (10000, ((5000, 5100), (5500, 5600), (5600, 5700), (5700, 5800), (5800, 5900), (5900, 6000),
             (6000, 6100)),
     (20, 23, 24, 25, 25, 24, 23)),
    (100000, ((50000, 50100), (50000, 50200), (52000, 52100), (54000, 54100), (56000, 56100),
              (58000, 58100), (60000, 60100)),
     (20, 20, 21, 22, 24, 25, 23)),
)
TABLE1_INFORMATIONAL = (
    (100000, (50000, 50200)),   # 幅200の窓（他と比較できない）
    (100000, (500, 600)),       # 行の並び 5500, 15500, ... から外れた窓（x ≈ 0.005N）
)
TABLE1_TOLERANCE = {1000: 0, 10000: 0, 100000: 1}

# --- table2: 0.58N 付近のビート（N → (下端, 上端, 幅, ピーク数)）
TABLE2 = {
    1000: (546, 604, 58, 14),
    10000: (5682, 5860, 176, 44),
    100000: (57452, 58016, 566, 141),
}
TABLE2_TOLERANCE = {1000: (4, 1), 10000: (10, 2), 100000: (32, 6)}   # (幅, ピーク数)

# --- table3: フーリエ空間（N → (全ピーク数, 最後のビートのピーク数, 最後のビートの長さ)）
TABLE3 = {
    1000: (167, 9, 45),
    4000: (667, 18, 87),
    10000: (1667, 29, 140),
    40000: (6667, 58, 276),
}
TABLE3_TOLERANCE = (3, 1)                 # (長さ, ピーク数)
TABLE3_GATED = (1000, 4000, 10000)        # 合否判定に使う N
TABLE3_TOTAL_RELATIVE = 0.01              # 全ピーク数の相対許容誤差

# --- table4: N = 6 の 4096 P(x, y)（行 y = 6..-6、列 x = -6..6）
ONE_D_ROW_6 = (1, 18, 9, 8, 9, 18, 1)
TABLE4_TENSOR = tuple(tuple(a * b for b in ONE_D_ROW_6) for a in ONE_D_ROW_6)
TABLE4_AQW = (
    (1, 26, 125, 200, 125, 26, 1),
    (26, 68, 50, 208, 50, 68, 26),
    (125, 50, 89, 40, 89, 50, 125),
    (200, 208, 40, 64, 40, 208, 200),
    (125, 50, 89, 40, 89, 50, 125),
    (26, 68, 50, 208, 50, 68, 26),
    (1, 26, 125, 200, 125, 26, 1),
)

# --- table5: 二項係数と擬二項分布（N = 0..7）
TABLE5_BINOMIAL = tuple(tuple(math.comb(n, k) for k in range(n + 1)) for n in range(8))
TABLE5_PSEUDOBINOMIAL = (
    (1,),
    (1, 1),
    (1, 2, 1),
    (1, 5, 5, 1),
    (1, 10, 18, 10, 1),
    (1, 17, 52, 52, 17, 1),
    (1, 26, 125, 200, 125, 26, 1),
    (1, 37, 261, 625, 625, 261, 37, 1),
)
EDGE_N4 = {0: 18, 2: 10, 4: 1}            # 256·P(N, y)（N = 4）

# --- 1D のスケーリング
X_MAX_EXACT = {100000: 70684, 1000000: 707050}
X_MAX_RATIO = 1.0 / math.sqrt(2)
X_MAX_RATIO_TOL = 0.01
P_XMAX_EXPONENT = -2.0 / 3.0
P_XMAX_PREFACTOR = 1.8
BALLISTIC_RATIO = 0.44
CENTRAL_EXPONENT = -1.0                   # P(0), P(N/2√2), P(N/2)
EXPONENT_TOL = 0.05
RELATIVE_TOL = 0.10
TOTAL_PEAK_DENSITY = 0.085
TOTAL_PEAK_DENSITY_TOL = 0.005
FOURIER_HALF_DENSITY = 1.0 / 12.0
FOURIER_HALF_DENSITY_TOL = 0.01

# --- 包絡線フィット
OUTER_C = 0.5
CENTER_C = 2.0
CENTER_C_TOL = 0.1
TAIL_D = 3.2
FOURIER_SMALL_C = 0.5
FOURIER_LARGE_C = 1.0
FOURIER_LARGE_C_TOL = 0.1
FOURIER_AMPLITUDE_EXPONENT = -0.5

# --- ピーク幅のスケーリング指数
WIDTH_EXPONENTS = {"first_10": 0.5, "last_10": 1.0 / 3.0, "fwhm": 1.0 / 3.0}

# --- 2D
SLICE_EXPONENTS = {"A1": (0.5, 0.1), "B1": (1.0, 0.1), "A2": (1.0, 0.1), "B2": (0.5, 0.2)}
SPECTRUM_SLICE_EXPONENTS = {          # (断面, 領域) -> (c, 許容差)。A2/B2 の大きい k は参考値
    ("A1", "small"): (0.5, 0.1),
    ("B1", "small"): (1.0, 0.1),
    ("A2", "small"): (0.5, 0.1),
    ("B2", "small"): (1.0, 0.2),
    ("A1", "large"): (1.0, 0.1),
    ("B1", "large"): (2.0, 0.1),
}
DIAGONAL_PEAK_DENSITY = 0.085
DIAGONAL_PEAK_DENSITY_TOL = 0.01
EDGE_SIGMA_RELATIVE_TOL = 0.03
EDGE_AMPLITUDE_EXPONENT = -1.0
ORACLE_MAX_RELATIVE_ERROR = 1e-5
ORACLE_FLOOR = 1e-12
FACTORIZATION_TOL = 1e-12
SPECTRUM_FACTORIZATION_TOL = 1e-10
DISPERSION_TOL = 1e-10
UNITARITY_TOL = 1e-12
EDGE_MATCH_TOL = 1e-12
