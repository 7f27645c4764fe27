import math

import numpy as np
import pytest

from qwsc.walks.dispersion import dispersion_grid, grover_dispersion, momentum_operator


def test_operator_is_unitary():
    u = momentum_operator(0.3, -1.2)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


def test_origin_eigenvalues():
    p = grover_dispersion(0.0, 0.0)
    assert np.allclose(p.eigenvalues, [1, -1, -1, -1], atol=1e-12)
    assert p.omegas == pytest.approx((0.0, math.pi, math.pi, math.pi))
    assert p.closed_form_deviation < 1e-12


def test_closed_form_on_grid():
    summary = dispersion_grid(8)
    assert summary["grid_points"] == 8.0
    assert summary["max_closed_form_deviation"] < 1e-10
    assert summary["max_unitarity_error"] < 1e-12
    # ω = π ∓ (cos k1 + cos k2)/2 は閉形式と一致しない
    assert summary["max_printed_form_deviation"] > 0.1


def test_out_of_range_wavevector():
    with pytest.raises(ValueError):
        grover_dispersion(-math.pi, 0.0)
    with pytest.raises(ValueError):
        dispersion_grid(0)


def test_point_to_dict():
    d = grover_dispersion(math.pi / 2, 0.25).to_dict()
    assert set(d) >= {"k1", "k2", "eigenvalues", "omegas"}
    assert len(d["eigenvalues"]) == 4
