"""The cells b(k), their Jacobi matrices and the operators F^i.

A vector q = (q_1, ..., q_p) lies in b(k) when

    q_i = z^{m+i-1} + a_{i,m+i-2} z^{m+i-2} + ... + a_{i,k_i} z^{k_i}

with every listed a_{i,l} > 0, and the Wronskian W_q has all its roots in
(-1, 0], simple on (-1, 0).  The defect k = sum_i (k_i - i + 1) is the
multiplicity of the root of W_q at 0; the remaining mp - k roots are written
-x_1 > -x_2 > ... (x_1 closest to zero).  This count n = mp - k agrees
with the form 2m - k only when p = 2; the general count is used throughout.

Coefficients are ordered a_{1,k_1}, ..., a_{1,m-1}, a_{2,k_2}, ..., i.e. by
polynomial, then by ascending exponent.  Row indices ``i`` in the public API
are 1-based, matching that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import mpmath

from .. import linalg
from ..polynomials import (
    RationalPoly,
    as_fraction,
    count_roots,
    real_roots,
    root_to_mpf,
    wronskian,
    wronskian_partial,
)
from . import numeric

__all__ = [
    "BKValidationError",
    "FStepError",
    "SignUncertifiedError",
    "MultiIndexK",
    "BKVector",
    "JacobiDelta",
    "validate_bk",
    "wronskian_roots_coords",
    "jacobi_delta",
    "chi",
    "kcond",
    "apply_F",
    "lowest_coefficient",
    "new_root_slope",
    "base_cell",
    "seed_chain",
    "geometric_schedule",
    "ThornTarget",
    "thorn_roots",
    "adaptive_walk",
    "adaptive_seed_chain",
    "perturb_point",
    "thorn_chain",
    "coefficient_ranking",
    "ranking_from_rows",
]


class BKValidationError(ValueError):
    """q is not in any cell b(k)."""


class FStepError(BKValidationError):
    """F^i is not applicable, or the parameter is too large."""


class SignUncertifiedError(ArithmeticError):
    pass


@dataclass(frozen=True)
class MultiIndexK:
    m: int
    k: tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.k)

    @property
    def defect(self) -> int:
        return sum(ki - i for i, ki in enumerate(self.k))

    def row_lengths(self) -> tuple[int, ...]:
        return tuple(self.m + i - ki for i, ki in enumerate(self.k))


@dataclass(frozen=True)
class BKVector:
    """rows[i] = (a_{i+1,k_{i+1}}, ..., a_{i+1,m+i-1}), ascending exponent."""

    m: int
    k: tuple[int, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for i, (ki, row) in enumerate(zip(self.k, self.rows)):
            if len(row) != self.m + i - ki:
                raise ValueError(f"row {i + 1} has {len(row)} coefficients, expected {self.m + i - ki}")

    @property
    def p(self) -> int:
        return len(self.k)

    @property
    def index(self) -> MultiIndexK:
        return MultiIndexK(self.m, self.k)

    @property
    def defect(self) -> int:
        return self.index.defect

    @property
    def order(self) -> tuple[Fraction, ...]:
        return tuple(a for row in self.rows for a in row)

    def slots(self) -> list[tuple[int, int]]:
        """(row i 1-based, exponent l) for each coefficient in order."""
        return [(i + 1, ki + t) for i, ki in enumerate(self.k) for t in range(self.m + i - ki)]

    def polys(self) -> list[RationalPoly]:
        out = []
        for i, (ki, row) in enumerate(zip(self.k, self.rows)):
            cs = [Fraction(0)] * ki + list(row) + [Fraction(1)]
            out.append(RationalPoly(cs))
        return out

    def wronskian(self) -> RationalPoly:
        return wronskian(self.polys())

    @classmethod
    def from_polys(cls, qs: Sequence[RationalPoly]) -> "BKVector":
        """Read off (m, k, coefficients) without checking positivity or roots."""
        p = len(qs)
        if p == 0:
            raise BKValidationError("empty vector")
        m = qs[0].degree
        k, rows = [], []
        for i, q in enumerate(qs):
            if q.degree != m + i or q.lc != 1:
                raise BKValidationError(f"q_{i + 1} must be monic of degree {m + i}")
            ki = q.order()
            k.append(ki)
            rows.append(tuple(q.coeffs[ki:-1]))
        return cls(m, tuple(k), tuple(rows))

    def to_kcoef(self) -> list[list[Fraction]]:
        """Big-cell coordinates of span(q_1, ..., q_p), only for k = (0, 1, ..., p-1).

        Subtracting multiples of lower q's clears every term of degree >= m
        except the leading one.  That change of basis is unipotent; listing
        the f_j by decreasing degree reverses the order, so
        W(f) = (-1)^{p(p-1)/2} W(q).
        """
        if self.k != tuple(range(self.p)):
            raise ValueError("only b(0,1,...,p-1) points have big-cell coordinates here")
        m, p = self.m, self.p
        reduced: list[RationalPoly] = []
        for q in self.polys():
            for lower in reversed(reduced):
                c = q.coeff(lower.degree)
                if c:
                    q = q - lower * c
            reduced.append(q)
        kc = [[Fraction(0)] * p for _ in range(m)]
        for j in range(p):
            f = reduced[p - 1 - j]
            for i in range(m):
                kc[i][j] = -f.coeff(m - 1 - i)
        return kc

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": list(self.k),
            "rows": [[_fs(a) for a in row] for row in self.rows],
        }


def _fs(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def validate_bk(q) -> MultiIndexK:
    """Certify q in b(k) with exact Sturm counts; returns the multi-index."""
    if not isinstance(q, BKVector):
        q = BKVector.from_polys([RationalPoly(f) if not isinstance(f, RationalPoly) else f for f in q])
    m, p, k = q.m, q.p, q.k
    if any(b <= a for a, b in zip(k, k[1:])) or k[0] < 0 or k[-1] >= m + p:
        raise BKValidationError(f"multi-index {k} is not strictly increasing in [0, m+p)")
    for i, row in enumerate(q.rows):
        for t, a in enumerate(row):
            if a <= 0:
                raise BKValidationError(f"coefficient a_{{{i + 1},{k[i] + t}}} = {a} is not positive")
    idx = q.index
    W = q.wronskian()
    if W.is_zero or W.order() != idx.defect:
        raise BKValidationError("order of W at 0 differs from the defect")
    Wr = W.shift_down(idx.defect)
    n = Wr.degree
    if n != m * p - idx.defect:
        raise BKValidationError("unexpected Wronskian degree")
    if n and count_roots(Wr, -1, 0) != n:
        raise BKValidationError("Wronskian has roots outside (-1, 0] or multiple roots in (-1, 0)")
    return idx


def _negative_roots(q: BKVector):
    """(W, reduced W, Root list ordered x_1, x_2, ...)."""
    W = q.wronskian()
    Wr = W.shift_down(q.defect)
    roots = real_roots(Wr, lo=-1, hi=0) if Wr.degree > 0 else []
    roots = sorted(roots, key=lambda r: r.hi, reverse=True)
    return W, Wr, roots


def wronskian_roots_coords(q: BKVector, dps: int = 50) -> list:
    """x_1 < x_2 < ... where -x_j are the negative roots of W_q."""
    validate_bk(q)
    W, Wr, roots = _negative_roots(q)
    dps += _digit_span(W)
    with mpmath.workdps(dps):
        return [-root_to_mpf(Wr, r, dps) for r in roots]


@dataclass
class JacobiDelta:
    entries: list  # rows x_i, columns coefficients in order
    det: object
    sign: int
    exact: bool


def _delta_entries(q, Wr, roots, partials, dW, dps):
    if all(r.exact for r in roots):
        return [[P(r.lo) / dW(r.lo) for P in partials] for r in roots], True
    with mpmath.workdps(dps):
        xs = [root_to_mpf(Wr, r, dps) for r in roots]
        return [[P.eval_mp(x) / dW.eval_mp(x) for P in partials] for x in xs], False


def jacobi_delta(q: BKVector, dps: int = 50) -> JacobiDelta:
    """Jacobi matrix d x_i / d a_j of q -> roots of W_q.

    With -x a simple root of W, implicit differentiation of W(-x; a) = 0
    gives dx/da = (dW/da)(-x) / W'(-x); dW/da is the Wronskian with the
    slot's polynomial replaced by the monomial (exact).  When all roots are
    rational the matrix and determinant are exact; otherwise the sign is
    accepted only if it is stable between two working precisions.
    """
    validate_bk(q)
    qs = q.polys()
    W, Wr, roots = _negative_roots(q)
    # thorn-like points have coefficients over many decades; evaluation near
    # the tiny roots cancels that many digits
    dps += _digit_span(W)
    dW = W.derivative()
    partials = [wronskian_partial(qs, i, l) for i, l in q.slots()]
    entries, exact = _delta_entries(q, Wr, roots, partials, dW, dps)
    if exact:
        d = linalg.det(entries)
        return JacobiDelta(entries, d, (d > 0) - (d < 0), True)
    with mpmath.workdps(dps):
        d1 = mpmath.det(mpmath.matrix(entries))
    hi, _ = _delta_entries(q, Wr, roots, partials, dW, dps + 30)
    with mpmath.workdps(dps + 30):
        d2 = mpmath.det(mpmath.matrix(hi))
        if d2 == 0 or abs(d1 - d2) > abs(d2) / 2:
            raise SignUncertifiedError("determinant sign not stable under precision increase")
    return JacobiDelta(entries, d1, 1 if d2 > 0 else -1, False)


def _digit_span(f: RationalPoly) -> int:
    mags = [abs(c) for c in f.coeffs if c]
    if len(mags) < 2:
        return 0
    lo, hi = min(mags), max(mags)
    # integer digit counts are enough for a precision budget
    return len(str(hi.numerator // hi.denominator + 1)) + len(str(lo.denominator // lo.numerator + 1))


def chi(k: MultiIndexK, i: int) -> int:
    """Number of coefficients (cells of the diagram) in rows 1..i-1."""
    if not 1 <= i <= k.p:
        raise IndexError(f"row {i} out of range 1..{k.p}")
    return sum(k.row_lengths()[: i - 1])


def kcond(k: Sequence[int], i: int) -> bool:
    if i == 1:
        return k[0] > 0
    return k[i - 1] > k[i - 2] + 1


def apply_F(q: BKVector, i: int, a) -> BKVector:
    """Add a * z^{k_i - 1} to q_i; the result must validate in b(k - e_i)."""
    a = as_fraction(a)
    if not 1 <= i <= q.p:
        raise IndexError(f"row {i} out of range 1..{q.p}")
    if not kcond(q.k, i):
        raise FStepError(f"F^{i} not defined at k = {q.k}")
    if a <= 0:
        raise FStepError("parameter must be positive")
    k = list(q.k)
    k[i - 1] -= 1
    rows = list(q.rows)
    rows[i - 1] = (a,) + rows[i - 1]
    out = BKVector(q.m, tuple(k), tuple(rows))
    try:
        validate_bk(out)
    except BKValidationError as exc:
        raise FStepError(f"F^{i} with a = {a} leaves the cell: {exc}") from exc
    return out


def _vandermonde(k) -> int:
    c = 1
    for l in range(len(k)):
        for j in range(l + 1, len(k)):
            c *= k[j] - k[l]
    return c


def _lowest(row) -> Fraction:
    # an empty row means q_i = z^{k_i}: its lowest coefficient is the leading 1
    return row[0] if row else Fraction(1)


def lowest_coefficient(q: BKVector) -> Fraction:
    """c = prod_{j>l}(k_j - k_l) prod_j a_{j,k_j}: the lowest coefficient of W_q."""
    c = Fraction(_vandermonde(q.k))
    for row in q.rows:
        c *= _lowest(row)
    return c


def new_root_slope(q: BKVector, i: int) -> Fraction:
    """lim y_0(a)/a for F^i_a(q), i.e. c*/(a c) = c_k / a_{i,k_i}."""
    if not kcond(q.k, i):
        raise FStepError(f"F^{i} not defined at k = {q.k}")
    ks = list(q.k)
    ks[i - 1] -= 1
    return Fraction(_vandermonde(ks), _vandermonde(q.k)) / _lowest(q.rows[i - 1])


def base_cell(m: int, p: int, a) -> BKVector:
    """q_1 = z^m + a z^{m-1}, q_i = z^{m+i-1}.

    W = (p-1)! (p-2)! ... 1! * z^{mp-1} (z + p a) up to the positive constant
    of the monomial Wronskian, so the point lies in its cell iff 0 < a < 1/p.
    """
    a = as_fraction(a)
    k = (m - 1,) + tuple(m + i for i in range(1, p))
    rows = ((a,),) + ((),) * (p - 1)
    return BKVector(m, k, rows)


def geometric_schedule(n: int, first, ratio) -> list[Fraction]:
    first, ratio = as_fraction(first), as_fraction(ratio)
    return [first * ratio**j for j in range(n)]


def seed_chain(sigma: Sequence[int], schedule: Sequence, m: int | None = None) -> BKVector:
    """Walk base cell -> b(0,...,p-1) applying F^{sigma_j} with schedule_j.

    schedule[0] is the base-cell coefficient.  Raises FStepError at the first step that leaves its cell.
    """
    p = max(sigma)
    if m is None:
        m = len(sigma) // p
    if len(sigma) != m * p or sigma[0] != 1:
        raise ValueError("sigma must be a full ballot sequence starting with 1")
    sched = [as_fraction(a) for a in schedule]
    if len(sched) != len(sigma):
        raise ValueError("schedule length must equal len(sigma)")
    if any(b >= a for a, b in zip(sched, sched[1:])):
        raise ValueError("schedule must be strictly decreasing")
    q = base_cell(m, p, sched[0])
    try:
        validate_bk(q)
    except BKValidationError as exc:
        raise FStepError(f"base cell: {exc}") from exc
    for j in range(1, len(sigma)):
        try:
            q = apply_F(q, sigma[j], sched[j])
        except FStepError as exc:
            raise FStepError(f"step {j + 1}: {exc}") from exc
    return q


def adaptive_walk(sigma: Sequence[int], m: int | None = None, first=None, max_halvings: int = 200):
    """Yield (q, a) after each step of the walk for sigma, starting with the base cell.

    Step j starts at a = (previous parameter)/4 and halves until F^{sigma_j}
    validates and the sign law gives the same sign at a and a/2.
    """
    p = max(sigma)
    if m is None:
        m = len(sigma) // p
    if len(sigma) != m * p or sigma[0] != 1:
        raise ValueError("sigma must be a full ballot sequence starting with 1")
    a = as_fraction(first) if first is not None else Fraction(1, 2 * p)
    q = base_cell(m, p, a)
    validate_bk(q)
    yield q, a
    sign = jacobi_delta(q).sign
    for j in range(1, len(sigma)):
        i = sigma[j]
        want = sign * (-1) ** chi(q.index, i)
        a = a / 4
        for _ in range(max_halvings):
            try:
                cand = apply_F(q, i, a)
                half = apply_F(q, i, a / 2)
                if jacobi_delta(cand).sign == want == jacobi_delta(half).sign:
                    break
            except (FStepError, SignUncertifiedError):
                pass
            a /= 2
        else:
            raise FStepError(f"step {j + 1}: no admissible parameter after {max_halvings} halvings")
        q, sign = cand, want
        yield q, a


def adaptive_seed_chain(
    sigma: Sequence[int], m: int | None = None, first=None, max_halvings: int = 200
) -> tuple[BKVector, list[Fraction]]:
    """Endpoint of :func:`adaptive_walk` and the schedule it used."""
    steps = list(adaptive_walk(sigma, m, first, max_halvings))
    return steps[-1][0], [a for _, a in steps]


def perturb_point(q: BKVector, rng, spread=Fraction(1, 20), tries: int = 50) -> BKVector:
    """Multiply every coefficient by a random rational factor in [1-spread, 1+spread].

    Retries until the result still lies in b(k); raises BKValidationError
    after ``tries`` failures.
    """
    spread = as_fraction(spread)
    for _ in range(tries):
        rows = tuple(
            tuple(a * (1 + spread * Fraction(int(rng.integers(-1000, 1001)), 1000)) for a in row) for row in q.rows
        )
        out = BKVector(q.m, q.k, rows)
        try:
            validate_bk(out)
        except BKValidationError:
            spread /= 2
            continue
        return out
    raise BKValidationError("no perturbation stayed in the cell")


@dataclass(frozen=True)
class ThornTarget:
    """Roots -x_1 > ... > -x_n with x_j = delta^{e_j}, e_1 > e_2 > ... >= 1.

    ``spacing="geometric"`` uses e_j = n - j + 1 (each root delta times the
    next).  ``"steep"`` uses e_j = 2^{n-j+1} - 1, which still satisfies
    x_j < delta * x_{j+1} but also makes every F-step of a thorn chain add a
    coefficient smaller than all earlier ones, so the coefficient ranking of
    the endpoint recovers the ballot sequence.
    """

    n: int
    delta: Fraction
    spacing: str = "steep"

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.spacing not in ("geometric", "steep"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.n < 1:
            raise ValueError("n must be positive")

    def exponent(self, s: int) -> int:
        """Exponent of the root created at chain step s (s = 1..n)."""
        return s if self.spacing == "geometric" else 2**s - 1

    def roots(self) -> list[Fraction]:
        """x_1 < x_2 < ... < x_n."""
        return [self.delta ** self.exponent(s) for s in range(self.n, 0, -1)]

    def poly(self) -> RationalPoly:
        return RationalPoly.from_roots([-x for x in self.roots()])


def thorn_roots(n: int, delta, spacing: str = "geometric") -> list[Fraction]:
    return ThornTarget(n, delta, spacing).roots()


def _to_fraction_digits(x, digits: int) -> Fraction:
    return Fraction(mpmath.nstr(x, digits, min_fixed=1, max_fixed=0))


def thorn_chain(sigma: Sequence[int], target: ThornTarget, m: int | None = None, dps: int = 60) -> BKVector:
    """Follow sigma so that after step s the roots of W are the s largest thorn roots.

    Each F^i step picks a from the new-root asymptotics (a = x / slope) and
    a Newton correction in the b(k) coordinates places the roots on the
    thorn (to ``dps`` digits).  Every intermediate vector is rounded to a
    decimal rational and certified by :func:`validate_bk`.
    """
    p = max(sigma)
    if m is None:
        m = len(sigma) // p
    if len(sigma) != m * p or sigma[0] != 1:
        raise ValueError("sigma must be a full ballot sequence starting with 1")
    if target.n != m * p:
        raise ValueError("target has the wrong number of roots")
    xs = [target.delta ** target.exponent(s) for s in range(1, m * p + 1)]
    # the base cell W = const * z^{mp-1}(z + p a) has its root at -p a
    q = base_cell(m, p, xs[0] / p)
    validate_bk(q)
    for s in range(2, m * p + 1):
        i = sigma[s - 1]
        q = apply_F(q, i, xs[s - 1] / new_root_slope(q, i))
        q = _snap_to_thorn(q, xs[:s], dps)
    return q


def _snap_to_thorn(q: BKVector, xs, dps) -> BKVector:
    m, p, k = q.m, q.p, q.k
    defect = q.defect
    target = RationalPoly.from_roots([-x for x in xs])
    dps += _digit_span(target)
    slots, nvars = numeric.bk_slots(m, p, k)
    n = len(xs)
    eq = list(range(defect, defect + n))
    table = numeric.build_table(slots, nvars, eq)
    lead = numeric.leading_constant(table)
    with mpmath.workdps(dps + 10):
        rhs = [lead * _mpq(target.coeff(d)) for d in range(n)]
        x0 = [_mpq(a) for a in q.order]
        x, _, ok = numeric.newton_mp(table, x0, rhs, dps=dps)
        if not ok:
            raise FStepError("Newton correction onto the thorn did not converge")
        vals = [_to_fraction_digits(v, dps) for v in x]
    rows, t = [], 0
    for i in range(p):
        L = m + i - k[i]
        rows.append(tuple(vals[t : t + L]))
        t += L
    out = BKVector(m, k, tuple(rows))
    validate_bk(out)
    return out


def _mpq(c: Fraction):
    return mpmath.mpf(c.numerator) / c.denominator


def ranking_from_rows(rows) -> tuple[int, ...]:
    """Row labels (1-based) of the coefficients listed in decreasing size."""
    items = sorted(((a, i + 1) for i, row in enumerate(rows) for a in row), reverse=True)
    vals = [a for a, _ in items]
    if len(set(vals)) != len(vals):
        raise ValueError("coefficients are not strictly ordered")
    return tuple(i for _, i in items)


def coefficient_ranking(q: BKVector) -> tuple[int, ...]:
    return ranking_from_rows(q.rows)
