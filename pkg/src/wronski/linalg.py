"""Small exact linear algebra over Q (lists of lists of Fractions)."""

from __future__ import annotations

from fractions import Fraction

from .polynomials import as_fraction

__all__ = ["as_matrix", "det", "rank", "matmul", "identity", "solve", "random_matrix"]


def as_matrix(rows) -> list[list[Fraction]]:
    return [[as_fraction(x) for x in row] for row in rows]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if A and len(A[0]) != len(B):
        raise ValueError("shape mismatch in matmul")
    cols = len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(cols)]
            for i in range(len(A))]


def _echelon(M):
    """Row-reduce a copy in place; returns (matrix, rank, sign of row swaps)."""
    M = [list(r) for r in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    r, sign = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        inv = 1 / M[r][c]
        for i in range(r + 1, rows):
            f = M[i][c] * inv
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return M, r, sign


def det(M) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    E, r, sign = _echelon(as_matrix(M))
    if r < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= E[i][i]
    return out


def rank(M) -> int:
    if not M:
        return 0
    return _echelon(as_matrix(M))[1]


def solve(A, B):
    """Solve A X = B for square nonsingular A (B is a list of rows)."""
    n = len(A)
    aug = [list(as_matrix([A[i]])[0]) + list(as_matrix([B[i]])[0]) for i in range(n)]
    k = len(aug[0]) - n
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug][:n] if k else []


def random_matrix(rng, rows, cols, lo=-5, hi=5, den=1):
    """Random small rational matrix; `rng` is a numpy Generator."""
    return [[Fraction(int(rng.integers(lo * den, hi * den + 1)), den) for _ in range(cols)]
            for _ in range(rows)]
