"""Exact rational linear algebra: fraction-free (Bareiss) rank and determinant.

Rows are scaled to integers first (row scaling preserves rank, and the
determinant is divided back out), so elimination runs on Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

Matrix = Sequence[Sequence[Fraction | int]]


def _integer_rows(rows: Matrix) -> tuple[list[list[int]], Fraction]:
    out = []
    scale = Fraction(1)
    for row in rows:
        fr = [Fraction(x) for x in row]
        d = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * d) for x in fr])
        scale *= d
    return out, scale


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination; returns (rank, signed last pivot).

    For a square nonsingular input the second value is the determinant.
    """
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                # exact division is guaranteed by Sylvester's identity
                ai[j] = (p * ai[j] - f * a[r][j]) // prev
            ai[c] = 0
        prev = p
        r += 1
    return r, sign * prev


def rank(rows: Matrix) -> int:
    if not rows or not rows[0]:
        return 0
    a, _ = _integer_rows(rows)
    return _bareiss(a)[0]


def det(rows: Matrix) -> Fraction:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a, scale = _integer_rows(rows)
    r, d = _bareiss(a)
    if r < n:
        return Fraction(0)
    return Fraction(d) / scale


def full_row_rank(rows: Matrix) -> bool:
    return rank(rows) == len(rows)


def matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    inner = len(b)
    if a and len(a[0]) != inner:
        raise ValueError("inner dimensions differ")
    cols = len(b[0]) if b else 0
    return [
        [sum((Fraction(a[i][k]) * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)]
        for i in range(len(a))
    ]


def hstack(*blocks: Matrix) -> list[list[Fraction]]:
    n = len(blocks[0])
    if any(len(b) != n for b in blocks):
        raise ValueError("row counts differ")
    return [[Fraction(x) for b in blocks for x in b[i]] for i in range(n)]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def charpoly(a: Matrix) -> list[Fraction]:
    """Coefficients of det(xI - A), highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        am = matmul(a, m) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        m = [[am[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = matmul(a, m)
        coeffs.append(-sum((am[i][i] for i in range(n)), Fraction(0)) / k)
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coeffs: Sequence[Fraction | int], max_abs: int = 10**12) -> list[Fraction]:
    """Distinct rational roots of a univariate polynomial (highest degree first).

    Uses the rational root theorem on the integer-scaled coefficients.  Returns
    an empty list when the constant/leading terms are too large to factor
    cheaply (larger than ``max_abs``).
    """
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if len(cs) <= 1:
        return []
    roots = []
    # factor out x^j
    while cs[-1] == 0:
        cs.pop()
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(cs) <= 1:
        return roots
    d = lcm(*(c.denominator for c in cs))
    ints = [int(c * d) for c in cs]
    lead, const = ints[0], ints[-1]
    if abs(lead) > max_abs or abs(const) > max_abs:
        return roots
    for p in _divisors(const):
        for q in _divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                acc = Fraction(0)
                for c in cs:
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return sorted(roots)
