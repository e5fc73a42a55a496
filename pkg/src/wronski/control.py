"""Static output feedback and the pole placement map.

A system x' = Ax + Bu, y = Cx (n states, m inputs, p outputs) under the
feedback u = Ky has closed-loop characteristic polynomial

    psi_K(z) = det(zI - A - BKC).

With a left factorisation C(zI - A)^{-1}B = D(z)^{-1} N(z), det D = det(zI - A),
the same polynomial is det(D - NK) = det [[D, N], [K, I]].  Replacing the
bottom block [K, I] by an arbitrary rank-m matrix hatK extends the map to
the Grassmannian; with [D, N] = E(z) this extension is the Wronski map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import linalg
from .grassmann import column_subsets, interpolate, osculating_E, plucker
from .polynomials import RationalPoly, poly_det, poly_gcd

__all__ = [
    "DimensionError",
    "InvalidFactorizationError",
    "DegenerateSystemError",
    "LinearSystem",
    "CoprimeFactors",
    "pole_poly_state",
    "pole_poly_factored",
    "pole_poly_direct",
    "extended_pole_map",
    "plucker_projection",
    "pole_poly_plucker",
    "wronski_system",
    "random_factors",
    "realize",
]


class DimensionError(ValueError):
    pass


class InvalidFactorizationError(ValueError):
    pass


class DegenerateSystemError(ArithmeticError):
    """The extended pole placement determinant vanishes identically."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def _poly_matrix(rows) -> list[list[RationalPoly]]:
    return [[e if isinstance(e, RationalPoly) else RationalPoly([e]) for e in row] for row in rows]


@dataclass(frozen=True)
class LinearSystem:
    A: list
    B: list
    C: list

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, linalg.as_matrix(getattr(self, name)))
        n = len(self.A)
        if n == 0 or any(len(r) != n for r in self.A):
            raise DimensionError("A must be square and nonempty")
        if len(self.B) != n or len({len(r) for r in self.B}) != 1:
            raise DimensionError("B must have n rows")
        if not self.C or any(len(r) != n for r in self.C):
            raise DimensionError("C must have n columns")

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def m(self) -> int:
        return len(self.B[0])

    @property
    def p(self) -> int:
        return len(self.C)

    def to_json(self) -> dict:
        return {k: [[_fs(x) for x in row] for row in getattr(self, k)] for k in "ABC"}

    @classmethod
    def from_json(cls, obj) -> "LinearSystem":
        return cls(obj["A"], obj["B"], obj["C"])


def _fs(c) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class CoprimeFactors:
    """Polynomial matrices D (p x p) and N (p x m).

    ``projection_only`` marks pairs used only as projection centres (the
    Wronski system); they skip the coprimeness and degree checks.
    """

    D: list
    N: list
    projection_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "D", _poly_matrix(self.D))
        object.__setattr__(self, "N", _poly_matrix(self.N))
        p = len(self.D)
        if p == 0 or any(len(r) != p for r in self.D):
            raise DimensionError("D must be square and nonempty")
        if len(self.N) != p or len({len(r) for r in self.N}) != 1:
            raise DimensionError("N must have p rows and a fixed column count")

    @property
    def p(self) -> int:
        return len(self.D)

    @property
    def m(self) -> int:
        return len(self.N[0])

    def stacked(self) -> list[list[RationalPoly]]:
        return [dr + nr for dr, nr in zip(self.D, self.N)]

    def minors(self) -> dict[tuple[int, ...], RationalPoly]:
        M = self.stacked()
        return {S: poly_det([[row[c] for c in S] for row in M])
                for S in combinations(range(self.p + self.m), self.p)}

    def validate(self) -> None:
        """Coprime (minors have no common zero) and det D strictly dominant."""
        if self.projection_only:
            return
        minors = self.minors()
        g = RationalPoly()
        for f in minors.values():
            g = poly_gcd(g, f)
        if g.is_zero or g.degree > 0:
            raise InvalidFactorizationError(f"full-size minors share the factor {g}")
        dD = minors[tuple(range(self.p))]
        n = dD.degree
        for S, f in minors.items():
            if S != tuple(range(self.p)) and not f.is_zero and f.degree >= n:
                raise InvalidFactorizationError(f"minor on columns {S} has degree {f.degree} >= deg det D = {n}")

    def to_json(self) -> dict:
        return {
            "D": [[f.to_json() for f in row] for row in self.D],
            "N": [[f.to_json() for f in row] for row in self.N],
            "projection_only": self.projection_only,
        }

    @classmethod
    def from_json(cls, obj) -> "CoprimeFactors":
        D = [[RationalPoly.from_json(f) for f in row] for row in obj["D"]]
        N = [[RationalPoly.from_json(f) for f in row] for row in obj["N"]]
        return cls(D, N, bool(obj.get("projection_only", False)))


def _check_gain(K, m, p):
    K = linalg.as_matrix(K)
    if len(K) != m or any(len(r) != p for r in K):
        raise DimensionError(f"gain must be {m} x {p}")
    return K


def pole_poly_state(system: LinearSystem, K, method: str = "bareiss") -> RationalPoly:
    """det(zI - A - BKC).

    ``method="bareiss"`` eliminates over Q[z]; ``"interpolate"`` evaluates
    the constant determinant at n+1 rational nodes and interpolates.
    """
    K = _check_gain(K, system.m, system.p)
    BKC = linalg.matmul(linalg.matmul(system.B, K), system.C)
    n = system.n
    Acl = [[system.A[i][j] + BKC[i][j] for j in range(n)] for i in range(n)]
    if method == "bareiss":
        return poly_det([[RationalPoly([-Acl[i][j], int(i == j)]) for j in range(n)] for i in range(n)])
    if method == "interpolate":
        xs = [Fraction(t) for t in range(n + 1)]
        ys = [linalg.det([[int(i == j) * x - Acl[i][j] for j in range(n)] for i in range(n)]) for x in xs]
        return interpolate(xs, ys)
    raise ValueError(f"unknown method {method!r}")


def pole_poly_direct(F: CoprimeFactors, K) -> RationalPoly:
    """det(D(z) - N(z) K)."""
    K = _check_gain(K, F.m, F.p)
    p, m = F.p, F.m
    M = [[F.D[i][j] - sum((F.N[i][l] * K[l][j] for l in range(m)), RationalPoly()) for j in range(p)]
         for i in range(p)]
    return poly_det(M)


def pole_poly_factored(F: CoprimeFactors, K) -> RationalPoly:
    """det [[D, N], [K, I]], which equals det(D - NK)."""
    K = _check_gain(K, F.m, F.p)
    hatK = [row + [int(i == j) for j in range(F.m)] for i, row in enumerate(K)]
    return _stacked_det(F, hatK)


def _stacked_det(F: CoprimeFactors, hatK) -> RationalPoly:
    return poly_det(F.stacked() + _poly_matrix(hatK))


def extended_pole_map(F: CoprimeFactors, hatK, normalize: bool = True) -> RationalPoly:
    """det [[D, N], [hatK]] for a rank-m matrix hatK (m x (m+p)).

    Returned with positive leading coefficient when ``normalize`` (the
    value is only defined up to the factor det U of hatK -> U hatK).
    """
    hatK = linalg.as_matrix(hatK)
    if len(hatK) != F.m or any(len(r) != F.m + F.p for r in hatK):
        raise DimensionError(f"hatK must be {F.m} x {F.m + F.p}")
    if linalg.rank(hatK) < F.m:
        raise DimensionError("hatK is rank deficient")
    psi = _stacked_det(F, hatK)
    if psi.is_zero:
        raise DegenerateSystemError("extended pole placement determinant vanishes", witness=hatK)
    return psi.normalized() if normalize else psi


def plucker_projection(F: CoprimeFactors) -> list[list[RationalPoly]]:
    """Laplace expansion along the top p rows: det [[D, N], [hatK]] =
    sum_S sign(S) * minor_S([D, N]) * plucker_{S^c}(hatK).

    Returns, for each column subset T of hatK (colex order), the polynomial
    multiplying plucker_T; each coefficient of the pole polynomial is thus a
    fixed linear form in the Pluecker coordinates.
    """
    p, m = F.p, F.m
    n = p + m
    minors = F.minors()
    index = {T: t for t, T in enumerate(column_subsets(n, m))}
    out = [RationalPoly() for _ in index]
    for S, f in minors.items():
        comp = tuple(c for c in range(n) if c not in S)
        sign = (-1) ** (sum(s + 1 for s in S) + p * (p + 1) // 2)
        out[index[comp]] = out[index[comp]] + f * sign
    return out


def pole_poly_plucker(F: CoprimeFactors, hatK) -> RationalPoly:
    """The extended map evaluated through :func:`plucker_projection`."""
    coords = plucker(hatK)
    return sum((c * x for c, x in zip(plucker_projection(F), coords)), RationalPoly())


def wronski_system(m: int, p: int) -> CoprimeFactors:
    """[D(z), N(z)] = E(z), the rows F, F', ..., F^{(p-1)} of F = (z^{m+p-1}, ..., 1)."""
    n = m + p
    # E(z) entries are monomials; osculating_E at z0 = 1 gives their coefficients
    coef = osculating_E(1, m, p)
    E = []
    for j in range(p):
        row = []
        for c in range(n):
            e = n - 1 - c - j
            row.append(RationalPoly.monomial(e, coef[j][c]) if e >= 0 else RationalPoly())
        E.append(row)
    return CoprimeFactors([r[:p] for r in E], [r[p:] for r in E], projection_only=True)


def random_factors(m: int, p: int, rng, lo=-3, hi=3, tries: int = 100) -> CoprimeFactors:
    """D = z^m I + D_{m-1} z^{m-1} + ... + D_0, N strictly proper of degree < m.

    det D is monic of degree n = mp; resampled until the pair is coprime.
    """
    for _ in range(tries):
        Dc = [linalg.random_matrix(rng, p, p, lo, hi) for _ in range(m)]
        Nc = [linalg.random_matrix(rng, p, m, lo, hi) for _ in range(m)]
        D = [[RationalPoly([Dc[t][i][j] for t in range(m)] + [int(i == j)]) for j in range(p)] for i in range(p)]
        N = [[RationalPoly([Nc[t][i][j] for t in range(m)]) for j in range(m)] for i in range(p)]
        F = CoprimeFactors(D, N)
        try:
            F.validate()
        except InvalidFactorizationError:
            continue
        return F
    raise RuntimeError("no coprime pair found")


def realize(F: CoprimeFactors) -> LinearSystem:
    """Observer-form realisation of D^{-1} N for D = z^r I + sum_t D_t z^t.

    With blocks indexed by t = r-1, ..., 0:
    A = [[-D_{r-1}, I, 0, ...], [-D_{r-2}, 0, I, ...], ..., [-D_0, 0, ..., 0]],
    B = [N_{r-1}; ...; N_0], C = [I, 0, ..., 0].  Then C(zI-A)^{-1}B = D^{-1}N
    and det(zI - A) = det D.
    """
    p, m = F.p, F.m
    r = max(f.degree for row in F.D for f in row)
    for i in range(p):
        for j in range(p):
            want = int(i == j)
            if F.D[i][j].coeff(r) != want or (i != j and F.D[i][j].degree >= r):
                raise InvalidFactorizationError("D must be z^r I plus lower-degree terms")
    if any(f.degree >= r for row in F.N for f in row if not f.is_zero):
        raise InvalidFactorizationError("N must have degree below that of D")
    n = r * p
    A = [[0] * n for _ in range(n)]
    B = [[0] * m for _ in range(n)]
    C = [[int(i == j) for j in range(n)] for i in range(p)]
    for blk in range(r):
        t = r - 1 - blk
        for i in range(p):
            for j in range(p):
                A[blk * p + i][j] = -F.D[i][j].coeff(t)
            if blk + 1 < r:
                A[blk * p + i][(blk + 1) * p + i] = 1
            for j in range(m):
                B[blk * p + i][j] = F.N[i][j].coeff(t)
    return LinearSystem(A, B, C)
