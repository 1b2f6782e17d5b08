from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from permuted_walks.linalg import (
    SingularSystemError,
    gauss_exact_reference,
    solve_exact,
    solve_exact_multi,
    solve_float,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(fractions, min_size=n, max_size=n),
    )
))
def test_matches_reference(system):
    a, b = system
    try:
        expected = gauss_exact_reference(a, b)
    except SingularSystemError:
        with pytest.raises(SingularSystemError):
            solve_exact(a, b)
        return
    assert solve_exact(a, b) == expected


def test_residual_is_zero():
    a = [[Fraction(1, 3), 2, 0], [1, Fraction(-1, 2), 4], [0, 5, Fraction(7, 9)]]
    b = [1, Fraction(2, 5), -3]
    x = solve_exact(a, b)
    for row, rhs in zip(a, b):
        assert sum(Fraction(c) * v for c, v in zip(row, x)) == rhs


def test_needs_pivoting():
    assert solve_exact([[0, 1], [1, 0]], [3, 4]) == [4, 3]


def test_singular():
    with pytest.raises(SingularSystemError):
        solve_exact([[1, 2], [2, 4]], [1, 2])


def test_multi_rhs_inverse():
    a = [[2, 1], [1, 3]]
    inv = solve_exact_multi(a, [[1, 0], [0, 1]])
    assert inv == [[Fraction(3, 5), Fraction(-1, 5)], [Fraction(-1, 5), Fraction(2, 5)]]


def test_empty():
    assert solve_exact([], []) == []


@given(st.integers(0, 2**32 - 1))
def test_float_agrees(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-5, 6, size=(5, 5))
    assume(abs(np.linalg.det(a)) > 1e-6)
    b = rng.integers(-5, 6, size=5)
    exact = solve_exact(a.tolist(), b.tolist())
    np.testing.assert_allclose(solve_float(a, b), [float(v) for v in exact], rtol=1e-9, atol=1e-9)
