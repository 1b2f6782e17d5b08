"""Exact and floating-point solvers for small dense linear systems.

The exact path clears denominators row by row and runs fraction-free
(Bareiss) elimination over Python integers, so intermediate entries are
minors of the scaled matrix and never need gcd reductions. Only the final
back-substitution produces Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

Number = int | Fraction


class SingularSystemError(ArithmeticError):
    pass


def _integer_rows(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]):
    rows = []
    for arow, brow in zip(a, b):
        entries = [Fraction(v) for v in arow] + [Fraction(v) for v in brow]
        scale = lcm(*(v.denominator for v in entries)) if entries else 1
        rows.append([v.numerator * (scale // v.denominator) for v in entries])
    return rows


def solve_exact_multi(
    a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]
) -> list[list[Fraction]]:
    """Solve A X = B exactly; B given row-wise (len(b) == len(a)). Returns X row-wise."""
    n = len(a)
    if n == 0:
        return []
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    k = len(b[0])
    m = _integer_rows(a, b)
    width = n + k
    prev = 1
    for col in range(n):
        # largest-magnitude pivot keeps the elimination order stable across runs
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0:
            raise SingularSystemError(f"matrix is singular (column {col})")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        pr = m[col]
        p = pr[col]
        for r in range(col + 1, n):
            row = m[r]
            f = row[col]
            if f == 0:
                for c in range(col + 1, width):
                    row[c] = (p * row[c]) // prev
            else:
                for c in range(col + 1, width):
                    row[c] = (p * row[c] - f * pr[c]) // prev
            row[col] = 0
        prev = p
    x = [[Fraction(0)] * k for _ in range(n)]
    for j in range(k):
        for r in range(n - 1, -1, -1):
            s = Fraction(m[r][n + j])
            row = m[r]
            for c in range(r + 1, n):
                if row[c]:
                    s -= row[c] * x[c][j]
            x[r][j] = s / row[r]
    return x


def solve_exact(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    return [row[0] for row in solve_exact_multi(a, [[v] for v in b])]


def solve_float(a, b) -> np.ndarray:
    """Partial-pivot LU via LAPACK."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return np.zeros(b.shape)
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc


def gauss_exact_reference(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    """Textbook Gauss-Jordan over Fractions. Slow; kept as an independent check on solve_exact."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise SingularSystemError(f"matrix is singular (column {col})")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [row[n] for row in m]
