import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from errors import InfeasibleProblemError
from modules.dist_signal.simplex import solve_lp


def test_small_lp():
    # min x1 + 2 x2 за x1 + x2 = 1
    result = solve_lp([1.0, 2.0], [[1.0, 1.0]], [1.0])
    assert result.objective == pytest.approx(1.0)
    assert np.allclose(result.x, [1.0, 0.0])


def test_negative_right_hand_side():
    result = solve_lp([1.0, 1.0], [[-1.0, -2.0]], [-2.0])
    assert result.objective == pytest.approx(1.0)


def test_redundant_rows_are_dropped():
    a = [[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]
    result = solve_lp([1.0, 0.0, 3.0], a, [1.0, 1.0, 1.0])
    assert result.objective == pytest.approx(0.0)
    assert np.allclose(np.asarray(a) @ result.x, 1.0)


def test_infeasible():
    with pytest.raises(InfeasibleProblemError, match="infeasible"):
        solve_lp([1.0, 1.0], [[1.0, 1.0]], [-1.0])


def test_unbounded():
    with pytest.raises(InfeasibleProblemError, match="unbounded"):
        solve_lp([-1.0, 0.0], [[1.0, -1.0]], [0.0])


@given(
    st.integers(1, 4),
    st.integers(2, 7),
    st.integers(0, 2**32 - 1),
)
def test_matches_scipy_linprog(rows, extra, seed):
    rng = np.random.default_rng(seed)
    cols = rows + extra
    a = rng.integers(-3, 4, size=(rows, cols)).astype(float)
    x0 = rng.random(cols)
    b = a @ x0
    c = rng.random(cols)
    ours = solve_lp(c, a, b)
    ref = linprog(c, A_eq=a, b_eq=b, bounds=[(0, None)] * cols, method="highs")
    assert ref.status == 0
    assert ours.objective == pytest.approx(ref.fun, abs=1e-7)
    assert np.allclose(a @ ours.x, b, atol=1e-7)
    assert np.all(ours.x >= 0)
