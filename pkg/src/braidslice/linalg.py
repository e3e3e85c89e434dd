"""Exact rational linear algebra on lists of lists of ``Fraction``.

Only the handful of routines the rest of the package needs: products,
determinants, inverses, ranks, kernels and linear solves.  Everything is
Gaussian elimination over Q, so results are exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in cols)
        for row in a
    )


def matmul_all(*ms: Sequence[Sequence[Fraction]]) -> Matrix:
    out = as_matrix(ms[0])
    for m in ms[1:]:
        out = matmul(out, m)
    return out


def add(a: Matrix, b: Matrix, scale: Fraction | int = 1) -> Matrix:
    return tuple(tuple(x + scale * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*a))


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int], int]:
    """Reduced row echelon form in place; returns (rows, pivot columns, sign of swaps)."""
    pivots: list[int] = []
    sign = 1
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots, sign


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(map(Fraction, r)) for r in rows if any(r)]
    if not rows:
        return 0
    return len(_echelon(rows)[1])


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    rows = [list(map(Fraction, r)) for r in a]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            out = -out
        out *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / rows[c][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    rows, pivots, _ = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def kernel(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : A x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    work = [list(map(Fraction, r)) for r in rows if any(r)]
    if not work:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    work, pivots, _ = _echelon(work)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -work[r][f]
        basis.append(tuple(v))
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector | None:
    """The unique solution of A x = rhs, or None if inconsistent or underdetermined."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    aug, pivots, _ = _echelon(aug)
    if ncols in pivots or len(pivots) < ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = aug[r][ncols]
    return tuple(x)


def in_span(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    return rank(list(basis) + [list(v)]) == rank(basis)


def solve_any(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector | None:
    """Some solution of A x = rhs (free variables set to 0), or None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    if not aug:
        return tuple(Fraction(0) for _ in range(ncols))
    aug, pivots, _ = _echelon(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = aug[r][ncols]
    return tuple(x)


def row_space(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """A basis (reduced echelon rows) of the span of the rows."""
    work = [list(map(Fraction, r)) for r in rows if any(r)]
    if not work:
        return []
    work, pivots, _ = _echelon(work)
    return work[:len(pivots)]
