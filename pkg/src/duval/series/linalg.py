"""Small dense linear algebra over the Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from ..scalar import Scalar, as_scalar


def _copy(m: Sequence[Sequence[Scalar]]) -> List[List[Scalar]]:
    return [[as_scalar(v) for v in row] for row in m]


def determinant(m: Sequence[Sequence[Scalar]]) -> Scalar:
    a = _copy(m)
    n = len(a)
    det: Scalar = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f != 0:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def invert_matrix(m: Sequence[Sequence[Scalar]]) -> List[List[Scalar]]:
    n = len(m)
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(_copy(m))]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def solve(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]):
    """One solution ``x`` of ``a x = b`` (free variables set to 0), or ``None``."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [list(r) + [as_scalar(v)] for r, v in zip(_copy(a), b)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(all(v == 0 for v in row[:cols]) and row[cols] != 0 for row in m):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return x
