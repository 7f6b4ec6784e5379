"""Exact linear algebra over the rationals for small dense systems.

Everything here works on lists of :class:`fractions.Fraction` rows. Matrices
are tiny (n <= a few dozen), so plain Gaussian elimination is both exact and
fast; no float ever enters the computation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence[int | Fraction]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def invert(matrix: Sequence[Sequence[int | Fraction]]) -> Matrix:
    """Invert a square matrix exactly; raises ValueError if singular."""
    a = to_fractions(matrix)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    inv = identity(n)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


class LinearSolution:
    """Outcome of solving A x = b exactly.

    ``status`` is one of ``unique`` / ``underdetermined`` / ``inconsistent``.
    For ``unique``, ``values`` holds the solution. For ``underdetermined``,
    ``particular`` holds one solution and ``free_directions`` a basis of the
    homogeneous solutions (both as Fraction lists).
    """

    def __init__(self, status: str, values: list[Fraction] | None = None,
                 particular: list[Fraction] | None = None,
                 free_directions: list[list[Fraction]] | None = None) -> None:
        self.status = status
        self.values = values
        self.particular = particular
        self.free_directions = free_directions or []


def solve(matrix: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]) -> LinearSolution:
    """Solve a (possibly rectangular) exact linear system A x = b."""
    a = to_fractions(matrix)
    b = [Fraction(x) for x in rhs]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        b[r], b[pivot] = b[pivot], b[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        b[r] = b[r] / p
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                b[i] = b[i] - f * b[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if b[i] != 0:
            return LinearSolution("inconsistent")
    free_cols = [c for c in range(cols) if c not in pivots]
    particular = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivots):
        particular[c] = b[row_idx]
    if not free_cols:
        return LinearSolution("unique", values=particular)
    directions = []
    for fc in free_cols:
        d = [Fraction(0)] * cols
        d[fc] = Fraction(1)
        for row_idx, c in enumerate(pivots):
            d[c] = -a[row_idx][fc]
        directions.append(d)
    return LinearSolution("underdetermined", particular=particular, free_directions=directions)
