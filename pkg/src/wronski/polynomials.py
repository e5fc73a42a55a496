"""Exact univariate polynomials over the rationals.

Coefficients are stored as :class:`fractions.Fraction` in ascending degree
order with trailing zeros trimmed.  Besides ring arithmetic the module
provides Wronskians (fraction-free Bareiss elimination over Q[z]),
square-free decomposition and Sturm-sequence real root isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from math import floor, gcd
from numbers import Rational
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "RationalPoly",
    "Root",
    "as_fraction",
    "poly_gcd",
    "poly_det",
    "wronskian",
    "wronskian_partial",
    "square_free_decomposition",
    "sturm_sequence",
    "count_roots",
    "real_roots",
    "refine_root",
    "root_to_mpf",
    "critical_points",
]


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, exact decimal strings or "num/den" strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # binary value of the float, not its decimal repr
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class RationalPoly:
    """Immutable polynomial with exact rational coefficients (ascending)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, n: int, c=1) -> "RationalPoly":
        if n < 0:
            raise ValueError("negative exponent")
        return cls([0] * n + [c])

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "RationalPoly":
        out = cls([lead])
        for r in roots:
            out = out * cls([-as_fraction(r), 1])
        return out

    # basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def order(self) -> int:
        """Multiplicity of the root at zero."""
        if self.is_zero:
            raise ValueError("order of the zero polynomial is undefined")
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise AssertionError  # unreachable

    def monic(self) -> "RationalPoly":
        if self.is_zero:
            raise ZeroDivisionError("zero polynomial has no monic form")
        return self * (1 / self.lc)

    def normalized(self) -> "RationalPoly":
        """Scale so the leading coefficient is positive (projective class rep)."""
        return -self if self.coeffs and self.lc < 0 else self

    def derivative(self, k: int = 1) -> "RationalPoly":
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return RationalPoly(cs)

    def shift_down(self, k: int) -> "RationalPoly":
        """Divide by z**k; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("polynomial not divisible by z**%d" % k)
        return RationalPoly(self.coeffs[k:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, x):
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
        return acc

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return RationalPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = RationalPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other):
        other = _coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RationalPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        n = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + n - 1] * inv
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RationalPoly(quot), RationalPoly(rem[: n - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "RationalPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}" + (f"*{mono}" if mono else "")
            terms.append(("-" if c < 0 else "+", s))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {sg} {s}" for sg, s in terms[1:])

    def is_proportional(self, other: "RationalPoly") -> bool:
        """True iff both are nonzero and differ by a nonzero scalar."""
        if self.is_zero or other.is_zero or self.degree != other.degree:
            return False
        return self * other.lc == other * self.lc

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {"coeffs": [_frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "RationalPoly":
        if isinstance(obj, dict):
            obj = obj["coeffs"]
        return cls(as_fraction(c) if not isinstance(c, float) else Fraction(str(c)) for c in obj)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coerce(x):
    if isinstance(x, RationalPoly):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return RationalPoly([x])
    return NotImplemented


def poly_gcd(f: RationalPoly, g: RationalPoly) -> RationalPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not g.is_zero:
        f, g = g, f % g
    return f.monic() if not f.is_zero else f


def poly_det(matrix: Sequence[Sequence[RationalPoly]]) -> RationalPoly:
    """Determinant of a square matrix over Q[z] by Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return RationalPoly([1])
    M = [[_coerce(e) for e in row] for row in matrix]
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    sign = 1
    prev = RationalPoly([1])
    for k in range(n - 1):
        if M[k][k].is_zero:
            piv = next((r for r in range(k + 1, n) if not M[r][k].is_zero), None)
            if piv is None:
                return RationalPoly()
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    return M[n - 1][n - 1] if sign > 0 else -M[n - 1][n - 1]


def wronskian(fs: Sequence[RationalPoly]) -> RationalPoly:
    """Wronski determinant det[f_j^{(r)}], rows r = 0..p-1."""
    fs = [_coerce(f) for f in fs]
    if not fs:
        raise ValueError("wronskian of an empty list")
    p = len(fs)
    rows = [[f.derivative(r) for f in fs] for r in range(p)]
    return poly_det(rows)


def wronskian_partial(fs: Sequence[RationalPoly], i: int, l: int) -> RationalPoly:
    """d W / d(coefficient of z^l in f_i), i is 1-based.

    W is linear in each argument, so this is W with f_i replaced by z^l.
    """
    if not 1 <= i <= len(fs):
        raise IndexError(f"slot {i} out of range 1..{len(fs)}")
    if l < 0:
        raise IndexError("negative monomial exponent")
    gs = list(fs)
    gs[i - 1] = RationalPoly.monomial(l)
    return wronskian(gs)


# real roots -----------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """A real root isolated in (lo, hi]; lo == hi means the root is exact."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.mid)

    def to_json(self) -> dict:
        return {"lo": _frac_str(self.lo), "hi": _frac_str(self.hi),
                "multiplicity": self.multiplicity, "approx": float(self.mid)}


def square_free_decomposition(f: RationalPoly) -> list[tuple[RationalPoly, int]]:
    """Yun's algorithm: f = lc * prod a_i**i with a_i square-free, coprime."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    out = []
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def sturm_sequence(f: RationalPoly) -> list[RationalPoly]:
    """Sturm sequence of f divided through by gcd(f, f'), so that it stays
    valid at multiple roots (it is then a Sturm sequence of the square-free part)."""
    seq = [f, f.derivative()]
    while not seq[-1].is_zero:
        seq.append(-(seq[-2] % seq[-1]))
    seq = seq[:-1]
    g = seq[-1]
    if g.degree > 0:
        seq = [h.exact_div(g) for h in seq]
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _var_at(seq, x) -> int:
    if x is None or x == "+inf":
        return _variations(_sign(g.lc) for g in seq)
    if x == "-inf":
        return _variations(_sign(g.lc) * (-1) ** g.degree for g in seq)
    return _variations(_sign(g(x)) for g in seq)


def count_roots(f: RationalPoly, lo=None, hi=None, seq=None) -> int:
    """Number of distinct real roots in (lo, hi]; None means infinite."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    seq = seq or sturm_sequence(f)
    a = "-inf" if lo is None else as_fraction(lo)
    b = "+inf" if hi is None else as_fraction(hi)
    return _var_at(seq, a) - _var_at(seq, b)


def _cauchy_bound(f: RationalPoly) -> Fraction:
    lc = abs(f.lc)
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))


def _isolate(g: RationalPoly, lo: Fraction, hi: Fraction, seq) -> list[Root]:
    """Isolate the roots of square-free g in (lo, hi]."""
    out = []
    stack = [(lo, hi, count_roots(g, lo, hi, seq))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(Root(b, b) if g(b) == 0 else Root(a, b))
            continue
        mid = (a + b) / 2
        n_left = count_roots(g, a, mid, seq)
        stack.append((mid, b, n - n_left))
        stack.append((a, mid, n_left))
    return sorted(out, key=lambda r: r.hi)


def refine_root(g: RationalPoly, root: Root, width, seq=None) -> Root:
    """Bisect the isolating interval of a square-free factor below `width`."""
    width = as_fraction(width)
    seq = seq or sturm_sequence(g)
    a, b = root.lo, root.hi
    while b - a > width:
        mid = (a + b) / 2
        if g(mid) == 0:
            return Root(mid, mid, root.multiplicity)
        if count_roots(g, a, mid, seq):
            b = mid
        else:
            a = mid
    return Root(a, b, root.multiplicity)


def real_roots(f: RationalPoly, lo=None, hi=None, width=None) -> list[Root]:
    """All real roots of f in the closed interval [lo, hi], with multiplicity.

    Roots are isolated for the square-free part and each is matched to the
    Yun factor that vanishes on it.  Intervals are refined below `width`
    when given.
    """
    if f.is_zero:
        raise ValueError("real_roots of the zero polynomial")
    if f.degree == 0:
        return []
    factors = square_free_decomposition(f)
    sqf = RationalPoly([1])
    for a, _ in factors:
        sqf = sqf * a
    seq = sturm_sequence(sqf)
    bound = _cauchy_bound(sqf)
    a = -bound - 1 if lo is None else as_fraction(lo)
    b = bound if hi is None else as_fraction(hi)
    roots = []
    if lo is not None and sqf(a) == 0:
        roots.append(Root(a, a))
    roots.extend(_isolate(sqf, a, b, seq))
    linear = [-a.coeffs[0] / a.coeffs[1] for a, _ in factors if a.degree == 1]
    lead = _primitive_lead(sqf)
    out = []
    for r in roots:
        if not r.exact:
            x = next((x for x in linear if r.lo < x <= r.hi), None)
            if x is not None:
                r = Root(x, x)
            elif lead.bit_length() <= RATIONAL_ROOT_BITS:
                r = _snap_rational(sqf, r, lead, seq)
        if width is not None and not r.exact:
            r = refine_root(sqf, r, width, seq)
        mult = _multiplicity(factors, r)
        out.append(Root(r.lo, r.hi, mult))
    return out


# rational roots are detected exactly when the primitive leading coefficient
# has at most this many bits (larger ones would cost many bisections)
RATIONAL_ROOT_BITS = 64


def _primitive_lead(f: RationalPoly) -> int:
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return abs(ints[-1]) // g


def _snap_rational(g: RationalPoly, r: Root, lead: int, seq) -> Root:
    """A rational root of the primitive integer form of g has denominator
    dividing ``lead``, so an interval narrower than 1/lead holds at most one
    candidate."""
    r = refine_root(g, r, Fraction(1, 2 * lead), seq)
    if r.exact:
        return r
    c = Fraction(floor(r.hi * lead), lead)
    return Root(c, c) if r.lo < c and g(c) == 0 else r


def _multiplicity(factors, r: Root) -> int:
    for a, i in factors:
        if r.exact:
            if a(r.lo) == 0:
                return i
        elif count_roots(a, r.lo, r.hi):
            return i
    raise AssertionError("root not attributed to any square-free factor")


def root_to_mpf(g: RationalPoly, root: Root, dps: int = 50):
    """High-precision value of a simple root of g inside its isolating interval."""
    if root.exact:
        return mpmath.mpf(root.lo.numerator) / root.lo.denominator
    with mpmath.workdps(dps + 10):
        lo = mpmath.mpf(root.lo.numerator) / root.lo.denominator
        hi = mpmath.mpf(root.hi.numerator) / root.hi.denominator
        dg = g.derivative()
        # g(hi) != 0 for a non-exact root; g(lo) may vanish at a neighbour
        fhi = g.eval_mp(hi)
        x = (lo + hi) / 2
        tol = mpmath.mpf(2) ** (-int((dps + 5) * 3.33))
        # the stopping rule is relative, so tiny roots need many bisections
        for _ in range(4000):
            fx = g.eval_mp(x)
            if fx == 0:
                break
            # keep the bracket, then try a Newton step inside it
            if (fx > 0) == (fhi > 0):
                hi = x
            else:
                lo = x
            d = dg.eval_mp(x)
            step_ok = False
            if d != 0:
                xn = x - fx / d
                if lo < xn < hi:
                    if abs(xn - x) <= tol * abs(xn):
                        x = xn
                        break
                    x, step_ok = xn, True
            if not step_ok:
                x = (lo + hi) / 2
            if hi - lo <= tol * min(abs(lo), abs(hi)):
                break
        return +x


def critical_points(f1: RationalPoly, f2: RationalPoly, **kw) -> list[Root]:
    """Finite real critical points of f2/f1 (the real roots of W(f1, f2))."""
    if poly_gcd(f1, f2).degree > 0:
        raise ValueError("f1 and f2 are not coprime")
    return real_roots(wronskian([f1, f2]), **kw)
