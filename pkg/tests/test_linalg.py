from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from colorctrl import linalg

small = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=150)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: matrices(r, c))))
def test_rank_matches_sympy(a):
    assert linalg.rank(a) == sympy.Matrix(a).rank()


@settings(max_examples=150)
@given(st.integers(1, 5).flatmap(lambda n: matrices(n, n)))
def test_det_matches_sympy(a):
    assert linalg.det(a) == Fraction(int(sympy.Matrix(a).det()))


def test_det_with_fractions():
    a = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert linalg.det(a) == Fraction(1, 10) - Fraction(1, 12)


def test_rank_of_zero_and_identity():
    assert linalg.rank([[0, 0], [0, 0]]) == 0
    assert linalg.rank(linalg.identity(4)) == 4
    assert linalg.full_row_rank([[1, 2, 3], [2, 4, 6]]) is False


@settings(max_examples=100)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_charpoly_matches_sympy(a):
    lam = sympy.Symbol("lam")
    expected = sympy.Poly(sympy.Matrix(a).charpoly(lam).as_expr(), lam).all_coeffs()
    assert linalg.charpoly(a) == [Fraction(int(c)) for c in expected]


@pytest.mark.parametrize(
    "coeffs, roots",
    [
        ([1, -3, 2], [1, 2]),
        ([2, -1], [Fraction(1, 2)]),
        ([1, 0, 1], []),
        ([1, 0, 0], [0]),
        ([6, -5, 1], [Fraction(1, 3), Fraction(1, 2)]),
    ],
)
def test_rational_roots(coeffs, roots):
    assert linalg.rational_roots(coeffs) == sorted(Fraction(r) for r in roots)


def test_matmul_and_hstack():
    a = [[1, 2], [3, 4]]
    assert linalg.matmul(a, linalg.identity(2)) == [[1, 2], [3, 4]]
    assert linalg.hstack(a, [[5], [6]]) == [[1, 2, 5], [3, 4, 6]]
