"""Exact linear algebra over the rationals (row reduction and null spaces)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list[Fraction]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form of a rational matrix.

    Returns the nonzero reduced rows and the list of pivot columns.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    mat = [[Fraction(x) for x in r] for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of the right null space ``{x : A x = 0}``, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def solve2(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Cramer's rule for a nonsingular 2x2 rational system."""
    (a, b), (c, d) = matrix
    det = a * d - b * c
    if det == 0:
        raise ZeroDivisionError("singular 2x2 system")
    return (rhs[0] * d - b * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det
