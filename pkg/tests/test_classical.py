import math

import numpy as np
import pytest

from qwsc.references.classical import (
    GaussianModel,
    binomial_coefficient_row,
    binomial_distribution,
    classical_walk_2d,
    gaussian_2d,
)


def test_binomial_rows():
    assert binomial_coefficient_row(4) == [1, 4, 6, 4, 1]
    assert binomial_coefficient_row(7) == [1, 7, 21, 35, 35, 21, 7, 1]
    with pytest.raises(ValueError):
        binomial_coefficient_row(65)


def test_binomial_distribution_small():
    d = binomial_distribution(4)
    assert d.positions.tolist() == [-4, -2, 0, 2, 4]
    assert np.allclose(d.probs * 16, [1, 4, 6, 4, 1])
    assert d.protocol == "classical-1d"


def test_binomial_distribution_large_is_normalized():
    d = binomial_distribution(1000000)
    assert abs(d.total() - 1.0) < 1e-9
    # 中心は 2/√(2πN)（格子間隔 2）
    assert d.value_at(0) == pytest.approx(2.0 / math.sqrt(2.0 * math.pi * 1e6), rel=1e-5)


def test_classical_walk_2d_is_product():
    d = classical_walk_2d(10)
    one = binomial_distribution(10)
    assert d.value_at(2, -4) == pytest.approx(one.value_at(2) * one.value_at(-4))
    assert d.value_at(1, 0) == 0.0
    assert abs(d.total() - 1.0) < 1e-12


def test_gaussian_2d_and_model():
    assert gaussian_2d(10, 0, 0) == pytest.approx(1.0 / (20.0 * math.pi))
    values = gaussian_2d(10, np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert values.shape == (2,)
    model = GaussianModel.from_fit({"A": 2.0, "sigma": 1.0})
    assert model.evaluate(np.array([0.0]))[0] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        GaussianModel(0.0, 1.0, 0.0, 0.0)
