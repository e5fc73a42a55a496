"""Pluecker coordinates, the osculating matrix and the Wronski map of G(m, m+p).

A point of the Grassmannian is the row space of a rank-m matrix K of size
m x (m+p).  The Wronski map sends K to the polynomial

    det [ E(z) ]
        [  K   ]

where the rows of E(z) are the derivatives of F(z) = (z^{m+p-1}, ..., z, 1).
The big cell is normalised as K = [k | I] and corresponds to the p-vector of
polynomials f_j = z^{m+p-j} - sum_i k_ij z^{m-i}.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

from . import linalg
from .polynomials import RationalPoly, as_fraction

__all__ = [
    "RankError",
    "column_subsets",
    "plucker",
    "osculating_E",
    "wronski_map",
    "big_cell_matrix",
    "big_cell_polys",
    "in_big_cell",
    "monomial_wronskian",
    "projection_matrix",
    "interpolate",
    "matrix_to_json",
    "matrix_from_json",
    "plucker_to_json",
]


class RankError(ValueError):
    """Matrix does not have full row rank."""


def column_subsets(n: int, m: int) -> list[tuple[int, ...]]:
    """m-subsets of range(n) in colexicographic order."""
    return sorted(combinations(range(n), m), key=lambda s: s[::-1])


def _check_K(K):
    K = linalg.as_matrix(K)
    m = len(K)
    if m == 0:
        raise ValueError("empty matrix")
    n = len(K[0])
    if any(len(r) != n for r in K) or n <= m:
        raise ValueError("K must be m x (m+p) with p >= 1")
    if linalg.rank(K) < m:
        raise RankError("K is rank deficient")
    return K, m, n - m


def plucker(K) -> list[Fraction]:
    """All maximal minors of K, columns indexed by colex-ordered subsets."""
    K, m, p = _check_K(K)
    return [linalg.det([[row[c] for c in S] for row in K]) for S in column_subsets(m + p, m)]


def osculating_E(z0, m: int, p: int) -> list[list[Fraction]]:
    """p x (m+p) matrix whose row j is F^{(j)}(z0)."""
    z0 = as_fraction(z0)
    n = m + p
    rows = []
    for j in range(p):
        row = []
        for c in range(n):
            e = n - 1 - c
            row.append(Fraction(factorial(e), factorial(e - j)) * z0 ** (e - j) if e >= j else Fraction(0))
        rows.append(row)
    return rows


def interpolate(xs, ys) -> RationalPoly:
    """Newton divided differences, exact."""
    coef = list(ys)
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = RationalPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * RationalPoly([-xs[i], 1]) + coef[i]
    return out


def wronski_map(K, normalize: bool = True) -> RationalPoly:
    """det [E(z); K] as a polynomial of degree <= mp.

    Computed by exact evaluation at mp+1 nodes and interpolation.  With
    ``normalize`` the result is scaled to have a positive leading
    coefficient (a representative of the projective class).
    """
    K, m, p = _check_K(K)
    xs = [Fraction(t) for t in range(m * p + 1)]
    ys = [linalg.det(osculating_E(x, m, p) + K) for x in xs]
    w = interpolate(xs, ys)
    if w.is_zero:
        raise AssertionError("Wronski map vanished on a rank-m matrix")
    return w.normalized() if normalize else w


def big_cell_matrix(kcoef) -> list[list[Fraction]]:
    kc = linalg.as_matrix(kcoef)
    m = len(kc)
    return [row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(kc)]


def big_cell_polys(kcoef) -> list[RationalPoly]:
    """f_{j} = z^{m+p-j} - k_{1j} z^{m-1} - ... - k_{mj}, j = 1..p."""
    kc = linalg.as_matrix(kcoef)
    m, p = len(kc), len(kc[0])
    out = []
    for j in range(p):
        cs = [Fraction(0)] * (m + p - j)
        cs[m + p - 1 - j] = Fraction(1)
        for i in range(m):
            cs[m - 1 - i] -= kc[i][j]
        out.append(RationalPoly(cs))
    return out


def in_big_cell(K) -> bool:
    """Rightmost m x m minor nonzero."""
    K = linalg.as_matrix(K)
    m = len(K)
    return linalg.det([row[-m:] for row in K]) != 0


def monomial_wronskian(exponents) -> tuple[int, int]:
    """W(z^e_1, ..., z^e_p) = c * z^d; returns (c, d).

    c is the Vandermonde product prod_{i<j} (e_j - e_i).
    """
    c = 1
    es = list(exponents)
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            c *= es[j] - es[i]
    p = len(es)
    return c, sum(es) - p * (p - 1) // 2


def projection_matrix(m: int, p: int) -> list[list[int]]:
    """Integer (mp+1) x C(m+p, m) matrix M with coeffs(det[E; K]) = M @ plucker(K).

    Laplace expansion along the p rows of E: the minor of E on columns S is
    the Wronskian of the monomials z^{n-1-s}, s in S.
    """
    n = m + p
    subsets = column_subsets(n, m)
    index = {S: t for t, S in enumerate(subsets)}
    M = [[0] * len(subsets) for _ in range(m * p + 1)]
    for S in combinations(range(n), p):
        c, d = monomial_wronskian([n - 1 - s for s in S])
        if c == 0:
            continue
        comp = tuple(x for x in range(n) if x not in S)
        sign = (-1) ** (sum(s + 1 for s in S) + p * (p + 1) // 2)
        M[d][index[comp]] += sign * c
    return M


def _fs(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def matrix_to_json(K) -> dict:
    K = linalg.as_matrix(K)
    m = len(K)
    return {"m": m, "p": len(K[0]) - m, "entries": [[_fs(x) for x in row] for row in K]}


def matrix_from_json(obj) -> list[list[Fraction]]:
    """Accepts {"entries": [[...]]} (m, p optional but checked) or a bare list of rows."""
    rows = obj["entries"] if isinstance(obj, dict) else obj
    K = linalg.as_matrix(rows)
    if isinstance(obj, dict) and "m" in obj and "p" in obj:
        if len(K) != obj["m"] or any(len(r) != obj["m"] + obj["p"] for r in K):
            raise ValueError("entries do not match the declared m, p")
    return K


def plucker_to_json(K) -> dict:
    K = linalg.as_matrix(K)
    m, n = len(K), len(K[0])
    return {
        "order": "colex",
        "coordinates": [
            {"subset": list(S), "value": _fs(v)} for S, v in zip(column_subsets(n, m), plucker(K))
        ],
    }
