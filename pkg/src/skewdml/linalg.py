"""Gaussian elimination over an exact field.

Entries may be Fractions or RatFuncs; anything with field operations and a
truthiness test for zero works.  Matrices are lists of row lists.
"""

from __future__ import annotations

from fractions import Fraction


def _pivot_key(e):
    # prefer low-degree pivots over Q(x) to limit expression swell
    deg = getattr(e, "degree", None)
    return deg if isinstance(deg, int) else 0


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    nr, nc = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        best = None
        for i in range(r, nr):
            if m[i][c] and (best is None or _pivot_key(m[i][c]) < _pivot_key(m[best][c])):
                best = i
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        inv = 1 / m[r][c]
        m[r] = [e * inv if e else e for e in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: list[list]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: list[list], ncols: int | None = None, zero=Fraction(0), one=Fraction(1)) -> list[list]:
    """Basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns, so the basis is in reduced echelon form up to column order.
    """
    if not rows:
        n = ncols or 0
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    red, piv = rref(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(piv):
            e = red[i][f]
            if e:
                v[pc] = -e
        basis.append(v)
    return basis


def solve(A: list[list], B: list[list]):
    """Solve ``A X = B`` exactly; return X (one particular solution) or None if inconsistent."""
    nr = len(A)
    n = len(A[0]) if nr else 0
    k = len(B[0]) if B else 0
    aug = [list(A[i]) + list(B[i]) for i in range(nr)]
    red, piv = rref(aug)
    if any(p >= n for p in piv):
        return None
    zero = _zero_like(A, B)
    X = [[zero] * k for _ in range(n)]
    for i, pc in enumerate(piv):
        for j in range(k):
            X[pc][j] = red[i][n + j]
    return X


def _zero_like(A, B):
    for row in list(A) + list(B):
        for e in row:
            return e * 0
    return Fraction(0)


def column_basis(rows: list[list]) -> list[int]:
    """Indices of a maximal set of linearly independent columns (pivot columns)."""
    return rref(rows)[1]
