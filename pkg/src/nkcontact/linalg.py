"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(directions)`` of ``A x = b``.

    ``particular`` has every free variable set to zero, so it is canonical for
    a given system.
    """

    particular: tuple[Fraction, ...]
    directions: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def members(self) -> list[tuple[Fraction, ...]]:
        """``particular`` and ``particular + d`` for each direction ``d``.

        An affine function vanishing on all of these vanishes on the whole
        solution set.
        """
        out = [self.particular]
        for d in self.directions:
            out.append(tuple(p + x for p, x in zip(self.particular, d)))
        return out


def rref(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    mat = [[Fraction(x) for x in row] for row in rows]
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
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def solve_affine(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction],
                 ncols: int) -> AffineSolution | None:
    """All solutions of ``rows @ x = rhs``, or None when inconsistent."""
    aug = [list(row) + [rhs_i] for row, rhs_i in zip(rows, rhs)]
    mat, pivots = rref(aug, ncols)
    for row in mat[len(pivots):]:
        if row[ncols] != 0:
            return None
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = mat[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    directions = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -mat[i][f]
        directions.append(tuple(vec))
    return AffineSolution(tuple(particular), tuple(directions))


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    sol = solve_affine(rows, [Fraction(0)] * len(rows), ncols)
    assert sol is not None
    return list(sol.directions)
