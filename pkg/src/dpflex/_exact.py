"""Exact integer/rational linear algebra used by the cone engine.

Vectors are plain tuples of ``int`` or ``Fraction``.  Nothing here touches
floating point.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple


def dot(u: Sequence, v: Sequence) -> int | Fraction:
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Iterable) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    v = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def primitive_int(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over QQ; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return _int_rank([list(r) for r in rows])


def _int_rank(rows: list[list]) -> int:
    # fraction-free elimination; rows are consumed
    rows = [[Fraction(x) for x in r] for r in rows]
    if any(x.denominator != 1 for r in rows for x in r):
        return len(rref(rows)[0])
    m = [[int(x) for x in r] for r in rows]
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk]
        for i in range(rk + 1, len(m)):
            f = m[i][c]
            if f:
                row = [p[c] * a - f * b for a, b in zip(m[i], p)]
                g = math.gcd(*row)
                m[i] = [x // g for x in row] if g > 1 else row
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(rows: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x : r.x = 0 for r in rows}, derived from the RREF.

    The basis depends only on the row space, so it is canonical.
    """
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def independent_subset(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a greedily chosen maximal linearly independent subset of rows."""
    chosen: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    for idx, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for c, e in echelon:
            if v[c] != 0:
                f = v[c] / e[c]
                v = [a - f * b for a, b in zip(v, e)]
        c = next((i for i, x in enumerate(v) if x != 0), None)
        if c is not None:
            echelon.append((c, v))
            chosen.append(idx)
    return chosen


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [row[n] for row in red]


def inverse_columns(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Columns of the inverse of a square nonsingular matrix."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [[red[i][n + j] for i in range(n)] for j in range(n)]


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by elimination over QQ."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            f = m[i][c] / p
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """A lattice basis of {x in Z^n : r.x = 0 for r in rows}.

    Column operations on the stacked matrix [rows; I] reduce ``rows`` to
    column echelon form with a unimodular transform; the transform columns
    sitting over zero columns span the kernel lattice.
    """
    rows = [[int(x) for x in r] for r in rows]
    # columns of the stacked matrix, each column = (rows part, identity part)
    cols = [[r[j] for r in rows] + [int(i == j) for i in range(n)] for j in range(n)]
    k = len(rows)
    start = 0
    for i in range(k):
        # gcd-reduce row i over columns start..n-1
        while True:
            nz = [j for j in range(start, n) if cols[j][i] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            for j in nz:
                if j != j0:
                    q = cols[j][i] // cols[j0][i]
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[j0])]
        nz = [j for j in range(start, n) if cols[j][i] != 0]
        if nz:
            j = nz[0]
            cols[start], cols[j] = cols[j], cols[start]
            start += 1
    return [tuple(c[k:]) for c in cols[start:]]
