import numpy as np
import pytest

from qwsc.walks.walk1d import evolve, exact_numerators
from qwsc.walks.walk2d import Walk2D, aqw_walk, exact_numerators_2d, grover_walk, tensor_walk


AQW_N6 = [
    [1, 26, 125, 200, 125, 26, 1],
    [26, 68, 50, 208, 50, 68, 26],
    [125, 50, 89, 40, 89, 50, 125],
    [200, 208, 40, 64, 40, 208, 200],
    [125, 50, 89, 40, 89, 50, 125],
    [26, 68, 50, 208, 50, 68, 26],
    [1, 26, 125, 200, 125, 26, 1],
]


def live_block(grid):
    """偶数サイトだけを取り出し、行 y = 6..-6、列 x = -6..6 に並べる。"""
    return grid[::2, ::2].T[::-1].tolist()


def test_tensor_exact_n6_is_outer_product():
    row = exact_numerators(6)
    grid = exact_numerators_2d("tensor-2d", 6)
    assert live_block(grid) == [[a * b for b in row] for a in row[::-1]]
    assert int(grid[2, 2]) == 324     # (x, y) = (-4, -4)


def test_aqw_exact_n6():
    assert live_block(exact_numerators_2d("aqw-2d", 6)) == AQW_N6


def test_grover_equals_aqw_exactly():
    for n in range(1, 9):
        assert np.array_equal(exact_numerators_2d("grover-2d", n), exact_numerators_2d("aqw-2d", n))


def test_exact_numerators_sum():
    for protocol in ("tensor-2d", "aqw-2d", "grover-2d"):
        assert int(exact_numerators_2d(protocol, 5).sum()) == 4**5


def test_tensor_walk_factorizes():
    n = 40
    one = evolve(n, [n])[n]
    two = tensor_walk(n)
    assert two.value_at(6, -10) == pytest.approx(one.value_at(6) * one.value_at(-10), abs=1e-15)
    assert two.value_at(5, 0) == 0.0
    assert abs(two.total() - 1.0) < 1e-12


def test_float_walks_match_exact():
    n = 8
    for walk, protocol in ((aqw_walk, "aqw-2d"), (grover_walk, "grover-2d")):
        d = walk(n)
        assert np.allclose(d.probs * 4**n, exact_numerators_2d(protocol, n), atol=1e-9)


def test_threads_are_bit_identical():
    single = aqw_walk(60)
    with Walk2D("aqw-2d", 60, threads=4, block_rows=8) as walk:
        walk.advance(60)
        multi = walk.distribution()
    assert np.array_equal(single.probs, multi.probs)


def test_walk2d_preconditions():
    with pytest.raises(ValueError):
        Walk2D("hex-2d", 5)
    with pytest.raises(ValueError):
        Walk2D("aqw-2d", 1001)
    with pytest.raises(ValueError):
        Walk2D("aqw-2d", 13, exact=True)
    with Walk2D("tensor-2d", 3) as walk:
        walk.advance(3)
        state = walk.state()
        assert state.amps.shape == (4, 7, 7)
        with pytest.raises(ValueError):
            walk.advance(1)
        with pytest.raises(ValueError):
            walk.exact_numerators()
