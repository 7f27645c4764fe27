import math
from fractions import Fraction

import pytest

from qwsc.walks.edge import (
    edge_distribution_analytic,
    edge_distribution_by_paths,
    edge_matches_simulation,
    edge_step_matrices,
    fit_edge_gaussian,
    pseudobinomial_triangle,
    reduce_path,
)


PSEUDOBINOMIAL = [
    [1],
    [1, 1],
    [1, 2, 1],
    [1, 5, 5, 1],
    [1, 10, 18, 10, 1],
    [1, 17, 52, 52, 17, 1],
    [1, 26, 125, 200, 125, 26, 1],
    [1, 37, 261, 625, 625, 261, 37, 1],
]


def test_step_matrices_absorb():
    r, s = edge_step_matrices()
    assert r[0, 0] == Fraction(1, 2) and r[0, 1] == Fraction(-1, 2)
    assert s[1, 0] == Fraction(-1, 2) and s[1, 1] == Fraction(1, 2)


def test_reduce_path():
    assert reduce_path("R") == (Fraction(1), "R")
    assert reduce_path("SRRS") == (Fraction(1, 8), "S")
    with pytest.raises(ValueError):
        reduce_path("RXS")
    with pytest.raises(ValueError):
        reduce_path("")


def test_worked_example_n4():
    e = edge_distribution_analytic(4)
    assert e.exact(0) == Fraction(18, 256)
    assert e.exact(2) == Fraction(10, 256)
    assert e.exact(4) == Fraction(1, 256)
    assert e.exact(1) == 0
    assert e.exact(6) == 0


def test_pseudobinomial_triangle():
    assert pseudobinomial_triangle(7) == PSEUDOBINOMIAL


def test_paths_agree_with_formula():
    for n in range(1, 11):
        assert edge_distribution_by_paths(n).numerators == edge_distribution_analytic(n).numerators
    with pytest.raises(ValueError):
        edge_distribution_by_paths(13)


def test_edge_is_normalized_like_row_of_squares():
    for n in (3, 17, 60):
        e = edge_distribution_analytic(n)
        # Σ 4^N P = 2 C(2N-2, N-1)
        assert sum(e.numerators) == 2 * math.comb(2 * n - 2, n - 1)


def test_edge_matches_simulation():
    assert edge_matches_simulation(6) < 1e-14
    assert edge_matches_simulation(30, threads=2) < 1e-12


def test_edge_gaussian_fit():
    edges = [edge_distribution_analytic(n) for n in (100, 200, 400, 1000)]
    fit = fit_edge_gaussian(edges)
    for n, sigma in zip(fit.series["n"], fit.series["sigma"]):
        assert sigma == pytest.approx(math.sqrt(n / 2.0), rel=0.03)
    assert fit.params["sigma_exponent"] == pytest.approx(0.5, abs=0.02)
    assert fit.params["amplitude_exponent"] == pytest.approx(-1.0, abs=0.05)


def test_edge_gaussian_preconditions():
    with pytest.raises(ValueError):
        fit_edge_gaussian([edge_distribution_analytic(n) for n in (100, 200, 400)])
    with pytest.raises(ValueError):
        fit_edge_gaussian([edge_distribution_analytic(n) for n in (200, 1000, 2000)])
    with pytest.raises(ValueError):
        edge_distribution_analytic(0)
